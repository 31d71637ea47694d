#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "core/grid.hpp"

namespace rcassi {

/// Spectral data cube. Storage is band-major, then row-major:
/// index = (k * ny + y) * nx + x. All values are finite; negative values are
/// permitted (solver iterates), clamping happens only at final export.
struct SpectralCube {
  std::uint32_t nx = 0;
  std::uint32_t ny = 0;
  WavelengthGrid grid;
  std::vector<double> data;

  SpectralCube(std::uint32_t nx, std::uint32_t ny, WavelengthGrid grid,
               std::vector<double> data);
  static SpectralCube zeros(std::uint32_t nx, std::uint32_t ny, WavelengthGrid grid);

  std::uint32_t channels() const { return grid.channels(); }
  std::size_t plane_size() const { return static_cast<std::size_t>(nx) * ny; }
  std::size_t size() const { return plane_size() * channels(); }
  std::size_t index(std::uint32_t x, std::uint32_t y, std::uint32_t k) const {
    return (static_cast<std::size_t>(k) * ny + y) * nx + x;
  }
  double at(std::uint32_t x, std::uint32_t y, std::uint32_t k) const {
    return data[index(x, y, k)];
  }
};

/// Single 2-D detector image, row-major (index = y * nx + x), finite values.
/// noise_sigma records the standard deviation of noise added to it (0 if none).
struct Measurement {
  std::uint32_t nx = 0;
  std::uint32_t ny = 0;
  std::vector<double> data;
  double noise_sigma = 0.0;

  Measurement(std::uint32_t nx, std::uint32_t ny, std::vector<double> data,
              double noise_sigma = 0.0);
  static Measurement zeros(std::uint32_t nx, std::uint32_t ny);

  std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }
  double at(std::uint32_t x, std::uint32_t y) const {
    return data[static_cast<std::size_t>(y) * nx + x];
  }
};

/// Copy of the band range [first_band, first_band + band_count).
SpectralCube slice_bands(const SpectralCube& cube, std::uint32_t first_band,
                         std::uint32_t band_count);

/// Concatenation along the spectral axis. Requires identical spatial dims and
/// low.grid.back() < high.grid.front(); per-band data ordering is preserved.
SpectralCube stitch_cubes(const SpectralCube& low, const SpectralCube& high);

/// Copy with negative values set to 0 (export-time clamp).
SpectralCube clamp_nonnegative(const SpectralCube& cube);

}  // namespace rcassi
