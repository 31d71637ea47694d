#include "metrics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/error.hpp"

namespace rcassi {

namespace {

void check_same_shape(const SpectralCube& a, const SpectralCube& b) {
  require(a.nx == b.nx && a.ny == b.ny && a.channels() == b.channels(),
          ErrorCode::dimension_mismatch, "cubes have different shapes");
}

}  // namespace

double spectral_correlation(const SpectralCube& recon, const SpectralCube& truth,
                            std::uint32_t x, std::uint32_t y) {
  check_same_shape(recon, truth);
  require(x < recon.nx && y < recon.ny, ErrorCode::invalid_argument,
          "probe point lies outside the cube");

  const std::uint32_t nl = recon.channels();
  double mean_a = 0.0, mean_b = 0.0;
  for (std::uint32_t k = 0; k < nl; ++k) {
    mean_a += recon.at(x, y, k);
    mean_b += truth.at(x, y, k);
  }
  mean_a /= nl;
  mean_b /= nl;

  double cov = 0.0, var_a = 0.0, var_b = 0.0;
  for (std::uint32_t k = 0; k < nl; ++k) {
    const double da = recon.at(x, y, k) - mean_a;
    const double db = truth.at(x, y, k) - mean_b;
    cov += da * db;
    var_a += da * da;
    var_b += db * db;
  }
  require(var_a > 0.0 && var_b > 0.0, ErrorCode::numeric_error,
          "zero-variance spectrum at probe point");
  return std::clamp(cov / (std::sqrt(var_a) * std::sqrt(var_b)), -1.0, 1.0);
}

double psnr(const SpectralCube& recon, const SpectralCube& truth) {
  check_same_shape(recon, truth);
  const double peak = *std::max_element(truth.data.begin(), truth.data.end());
  require(peak > 0.0, ErrorCode::invalid_argument,
          "psnr requires a truth cube with a positive peak");
  double mse = 0.0;
  for (std::size_t i = 0; i < truth.data.size(); ++i) {
    const double d = recon.data[i] - truth.data[i];
    mse += d * d;
  }
  mse /= static_cast<double>(truth.data.size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(peak * peak / mse);
}

}  // namespace rcassi
