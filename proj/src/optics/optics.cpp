#include "optics/optics.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <utility>

#include "core/error.hpp"
#include "core/random.hpp"

namespace rcassi {

CodedAperture::CodedAperture(std::uint32_t width_, std::uint32_t height_,
                             std::int32_t origin_offset_, std::vector<std::uint8_t> values_)
    : width(width_), height(height_), origin_offset(origin_offset_),
      values(std::move(values_)) {
  require(width >= 1 && height >= 1, ErrorCode::invalid_argument,
          "mask dimensions must be at least 1x1");
  require(values.size() == static_cast<std::size_t>(width) * height,
          ErrorCode::dimension_mismatch, "mask value count does not match width*height");
  for (std::uint8_t v : values) {
    require(v <= 1, ErrorCode::invalid_argument, "mask values must be 0 or 1");
  }
}

std::uint8_t CodedAperture::at(std::int64_t extended_index, std::uint32_t y) const {
  const std::int64_t column = extended_index - origin_offset;
  require(column >= 0 && column < static_cast<std::int64_t>(width) && y < height,
          ErrorCode::invalid_argument, "mask lookup outside the stored extent");
  return values[static_cast<std::size_t>(y) * width + static_cast<std::size_t>(column)];
}

std::pair<std::uint32_t, std::int32_t> SystemOperator::mask_extent(
    std::uint32_t nx, std::uint32_t n_channels, DispersionModel dispersion) {
  // shift(k) is affine in k, so its extremes sit at the first and last channel.
  const std::int64_t s0 = dispersion.shift(0);
  const std::int64_t s1 = dispersion.shift(n_channels - 1);
  const std::int64_t lo = std::min(s0, s1);
  const std::int64_t hi = std::max(s0, s1);
  const std::int64_t width = static_cast<std::int64_t>(nx) + (hi - lo);
  return {static_cast<std::uint32_t>(width), static_cast<std::int32_t>(-hi)};
}

SystemOperator::SystemOperator(std::uint32_t nx, std::uint32_t ny, WavelengthGrid grid,
                               CodedAperture mask, DispersionModel dispersion)
    : nx_(nx), ny_(ny), grid_(std::move(grid)), mask_(std::move(mask)),
      dispersion_(dispersion) {
  require(nx_ >= 1 && ny_ >= 1, ErrorCode::invalid_argument,
          "operator spatial dimensions must be at least 1x1");
  const auto [want_width, want_origin] = mask_extent(nx_, grid_.channels(), dispersion_);
  require(mask_.height == ny_, ErrorCode::dimension_mismatch,
          "mask height does not match the scene height");
  require(mask_.width == want_width, ErrorCode::dimension_mismatch,
          "mask width does not cover the dispersion sweep exactly");
  require(mask_.origin_offset == want_origin, ErrorCode::dimension_mismatch,
          "mask origin_offset does not match the dispersion sweep");
}

namespace {

// Storage column of detector x = 0 for channel k; lookups are x + base.
inline std::int64_t column_base(const SystemOperator& op, std::uint32_t k) {
  return -op.dispersion().shift(k) - op.mask().origin_offset;
}

}  // namespace

void forward_into(const SystemOperator& op, std::span<const double> cube,
                  std::span<double> meas) {
  assert(cube.size() == op.cube_size());
  assert(meas.size() == op.plane_size());
  const std::uint32_t nx = op.nx(), ny = op.ny(), nl = op.channels();
  std::fill(meas.begin(), meas.end(), 0.0);
  for (std::uint32_t k = 0; k < nl; ++k) {
    const std::int64_t base = column_base(op, k);
    for (std::uint32_t y = 0; y < ny; ++y) {
      const double* band = cube.data() + (static_cast<std::size_t>(k) * ny + y) * nx;
      const std::uint8_t* mask_row =
          op.mask().values.data() + static_cast<std::size_t>(y) * op.mask().width;
      double* out = meas.data() + static_cast<std::size_t>(y) * nx;
      for (std::uint32_t x = 0; x < nx; ++x) {
        out[x] += band[x] * static_cast<double>(mask_row[x + base]);
      }
    }
  }
}

void adjoint_into(const SystemOperator& op, std::span<const double> meas,
                  std::span<double> cube) {
  assert(meas.size() == op.plane_size());
  assert(cube.size() == op.cube_size());
  const std::uint32_t nx = op.nx(), ny = op.ny(), nl = op.channels();
  for (std::uint32_t k = 0; k < nl; ++k) {
    const std::int64_t base = column_base(op, k);
    for (std::uint32_t y = 0; y < ny; ++y) {
      const double* in = meas.data() + static_cast<std::size_t>(y) * nx;
      const std::uint8_t* mask_row =
          op.mask().values.data() + static_cast<std::size_t>(y) * op.mask().width;
      double* band = cube.data() + (static_cast<std::size_t>(k) * ny + y) * nx;
      for (std::uint32_t x = 0; x < nx; ++x) {
        band[x] = in[x] * static_cast<double>(mask_row[x + base]);
      }
    }
  }
}

Measurement forward(const SystemOperator& op, const SpectralCube& cube) {
  require(cube.nx == op.nx() && cube.ny == op.ny() && cube.channels() == op.channels(),
          ErrorCode::dimension_mismatch, "cube dimensions do not match the operator");
  std::vector<double> out(op.plane_size());
  forward_into(op, cube.data, out);
  return Measurement(op.nx(), op.ny(), std::move(out));
}

SpectralCube adjoint(const SystemOperator& op, const Measurement& meas) {
  require(meas.nx == op.nx() && meas.ny == op.ny(), ErrorCode::dimension_mismatch,
          "measurement dimensions do not match the operator");
  std::vector<double> out(op.cube_size());
  adjoint_into(op, meas.data, out);
  return SpectralCube(op.nx(), op.ny(), op.grid(), std::move(out));
}

std::vector<double> diag_hht(const SystemOperator& op) {
  const std::uint32_t nx = op.nx(), ny = op.ny(), nl = op.channels();
  std::vector<double> weights(op.plane_size(), 0.0);
  for (std::uint32_t k = 0; k < nl; ++k) {
    const std::int64_t base = column_base(op, k);
    for (std::uint32_t y = 0; y < ny; ++y) {
      const std::uint8_t* mask_row =
          op.mask().values.data() + static_cast<std::size_t>(y) * op.mask().width;
      double* out = weights.data() + static_cast<std::size_t>(y) * nx;
      for (std::uint32_t x = 0; x < nx; ++x) {
        out[x] += static_cast<double>(mask_row[x + base]);
      }
    }
  }
  return weights;
}

std::vector<double> build_explicit_matrix(const SystemOperator& op,
                                          std::size_t max_columns) {
  const std::size_t rows = op.plane_size();
  const std::size_t cols = op.cube_size();
  require(cols <= max_columns, ErrorCode::invalid_argument,
          "explicit matrix column count exceeds the size cap");
  const std::uint32_t nx = op.nx(), ny = op.ny(), nl = op.channels();
  std::vector<double> matrix(rows * cols, 0.0);
  for (std::uint32_t k = 0; k < nl; ++k) {
    const std::int64_t base = column_base(op, k);
    for (std::uint32_t y = 0; y < ny; ++y) {
      const std::uint8_t* mask_row =
          op.mask().values.data() + static_cast<std::size_t>(y) * op.mask().width;
      for (std::uint32_t x = 0; x < nx; ++x) {
        const std::size_t row = static_cast<std::size_t>(y) * nx + x;
        const std::size_t col = (static_cast<std::size_t>(k) * ny + y) * nx + x;
        matrix[row * cols + col] = static_cast<double>(mask_row[x + base]);
      }
    }
  }
  return matrix;
}

Measurement add_noise(const Measurement& meas, double sigma_fraction, std::uint64_t seed) {
  require(std::isfinite(sigma_fraction) && sigma_fraction >= 0.0,
          ErrorCode::invalid_argument, "noise sigma must be finite and nonnegative");
  Measurement out = meas;
  out.noise_sigma = 0.0;
  if (sigma_fraction == 0.0) return out;
  const double peak = std::max(0.0, *std::max_element(meas.data.begin(), meas.data.end()));
  const double sigma = sigma_fraction * peak;
  if (sigma == 0.0) return out;
  GaussianSampler gauss(seed);
  for (double& v : out.data) v += sigma * gauss.next();
  out.noise_sigma = sigma;
  return out;
}

}  // namespace rcassi
