#include "core/cube.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "core/error.hpp"

namespace rcassi {

namespace {

void require_finite(const std::vector<double>& values, const char* what) {
  for (double v : values) {
    require(std::isfinite(v), ErrorCode::invalid_argument,
            std::string(what) + " contains a non-finite value");
  }
}

}  // namespace

SpectralCube::SpectralCube(std::uint32_t nx_, std::uint32_t ny_, WavelengthGrid grid_,
                           std::vector<double> data_)
    : nx(nx_), ny(ny_), grid(std::move(grid_)), data(std::move(data_)) {
  require(nx >= 1 && ny >= 1, ErrorCode::invalid_argument,
          "cube spatial dimensions must be at least 1x1");
  require(data.size() == size(), ErrorCode::dimension_mismatch,
          "cube data length does not match nx*ny*n_channels");
  require_finite(data, "cube data");
}

SpectralCube SpectralCube::zeros(std::uint32_t nx, std::uint32_t ny, WavelengthGrid grid) {
  const std::size_t n =
      static_cast<std::size_t>(nx) * ny * grid.channels();
  return SpectralCube(nx, ny, std::move(grid), std::vector<double>(n, 0.0));
}

Measurement::Measurement(std::uint32_t nx_, std::uint32_t ny_, std::vector<double> data_,
                         double noise_sigma_)
    : nx(nx_), ny(ny_), data(std::move(data_)), noise_sigma(noise_sigma_) {
  require(nx >= 1 && ny >= 1, ErrorCode::invalid_argument,
          "measurement dimensions must be at least 1x1");
  require(data.size() == size(), ErrorCode::dimension_mismatch,
          "measurement data length does not match nx*ny");
  require_finite(data, "measurement data");
  require(std::isfinite(noise_sigma) && noise_sigma >= 0.0, ErrorCode::invalid_argument,
          "noise_sigma must be finite and nonnegative");
}

Measurement Measurement::zeros(std::uint32_t nx, std::uint32_t ny) {
  return Measurement(nx, ny, std::vector<double>(static_cast<std::size_t>(nx) * ny, 0.0));
}

SpectralCube slice_bands(const SpectralCube& cube, std::uint32_t first_band,
                         std::uint32_t band_count) {
  require(band_count >= 1, ErrorCode::invalid_argument, "band slice must be nonempty");
  require(first_band < cube.channels() && band_count <= cube.channels() - first_band,
          ErrorCode::invalid_argument, "band slice exceeds cube channels");
  std::vector<double> wl(cube.grid.wavelengths.begin() + first_band,
                         cube.grid.wavelengths.begin() + first_band + band_count);
  const std::size_t plane = cube.plane_size();
  std::vector<double> data(cube.data.begin() + static_cast<std::size_t>(first_band) * plane,
                           cube.data.begin() +
                               (static_cast<std::size_t>(first_band) + band_count) * plane);
  return SpectralCube(cube.nx, cube.ny, WavelengthGrid(std::move(wl)), std::move(data));
}

SpectralCube stitch_cubes(const SpectralCube& low, const SpectralCube& high) {
  require(low.nx == high.nx && low.ny == high.ny, ErrorCode::dimension_mismatch,
          "stitch requires identical spatial dimensions");
  require(low.grid.back() < high.grid.front(), ErrorCode::invalid_argument,
          "stitch requires disjoint, ascending wavelength ranges");
  std::vector<double> wl = low.grid.wavelengths;
  wl.insert(wl.end(), high.grid.wavelengths.begin(), high.grid.wavelengths.end());
  std::vector<double> data = low.data;
  data.insert(data.end(), high.data.begin(), high.data.end());
  return SpectralCube(low.nx, low.ny, WavelengthGrid(std::move(wl)), std::move(data));
}

SpectralCube clamp_nonnegative(const SpectralCube& cube) {
  SpectralCube out = cube;
  for (double& v : out.data) v = std::max(0.0, v);
  return out;
}

}  // namespace rcassi
