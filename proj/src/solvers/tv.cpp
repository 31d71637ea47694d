#include "solvers/tv.hpp"

#include <cassert>
#include <cmath>

#include "core/error.hpp"

namespace rcassi {

double total_variation(std::span<const double> image, std::uint32_t nx, std::uint32_t ny) {
  assert(image.size() == static_cast<std::size_t>(nx) * ny);
  double acc = 0.0;
  for (std::uint32_t y = 0; y < ny; ++y) {
    const double* row = image.data() + static_cast<std::size_t>(y) * nx;
    const double* next_row = row + nx;
    for (std::uint32_t x = 0; x < nx; ++x) {
      const double dx = (x + 1 < nx) ? row[x + 1] - row[x] : 0.0;
      const double dy = (y + 1 < ny) ? next_row[x] - row[x] : 0.0;
      acc += std::sqrt(dx * dx + dy * dy);
    }
  }
  return acc;
}

namespace {

// Divergence adjoint to the forward-difference gradient: for each axis the
// first pixel takes +p, the last takes -p of its predecessor, interior pixels
// take the backward difference. The far-edge dual component is never written
// by the update below and stays 0.
inline double divergence_at(const std::vector<double>& p1, const std::vector<double>& p2,
                            std::uint32_t nx, std::uint32_t ny, std::uint32_t x,
                            std::uint32_t y) {
  const std::size_t i = static_cast<std::size_t>(y) * nx + x;
  double d = 0.0;
  if (x == 0) {
    d += p1[i];
  } else if (x == nx - 1) {
    d -= p1[i - 1];
  } else {
    d += p1[i] - p1[i - 1];
  }
  if (y == 0) {
    d += p2[i];
  } else if (y == ny - 1) {
    d -= p2[i - nx];
  } else {
    d += p2[i] - p2[i - nx];
  }
  return d;
}

}  // namespace

std::vector<double> tv_denoise(std::span<const double> image, std::uint32_t nx,
                               std::uint32_t ny, double weight, std::uint32_t inner_iters) {
  require(nx >= 1 && ny >= 1, ErrorCode::invalid_argument,
          "tv_denoise needs a nonempty image");
  require(image.size() == static_cast<std::size_t>(nx) * ny, ErrorCode::dimension_mismatch,
          "tv_denoise image length does not match nx*ny");
  require(std::isfinite(weight) && weight >= 0.0, ErrorCode::invalid_argument,
          "tv weight must be finite and nonnegative");
  std::vector<double> out(image.begin(), image.end());
  if (weight == 0.0 || inner_iters == 0) return out;

  const std::size_t n = out.size();
  const double tau = 0.25;
  std::vector<double> p1(n, 0.0), p2(n, 0.0), work(n);

  for (std::uint32_t iter = 0; iter < inner_iters; ++iter) {
    // work = div(p) - g / weight
    for (std::uint32_t y = 0; y < ny; ++y) {
      for (std::uint32_t x = 0; x < nx; ++x) {
        const std::size_t i = static_cast<std::size_t>(y) * nx + x;
        work[i] = divergence_at(p1, p2, nx, ny, x, y) - image[i] / weight;
      }
    }
    // p = (p + tau * grad(work)) / (1 + tau * |grad(work)|)
    for (std::uint32_t y = 0; y < ny; ++y) {
      for (std::uint32_t x = 0; x < nx; ++x) {
        const std::size_t i = static_cast<std::size_t>(y) * nx + x;
        const double gx = (x + 1 < nx) ? work[i + 1] - work[i] : 0.0;
        const double gy = (y + 1 < ny) ? work[i + nx] - work[i] : 0.0;
        const double denom = 1.0 + tau * std::sqrt(gx * gx + gy * gy);
        p1[i] = (p1[i] + tau * gx) / denom;
        p2[i] = (p2[i] + tau * gy) / denom;
      }
    }
  }

  for (std::uint32_t y = 0; y < ny; ++y) {
    for (std::uint32_t x = 0; x < nx; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * nx + x;
      out[i] = image[i] - weight * divergence_at(p1, p2, nx, ny, x, y);
    }
  }
  return out;
}

}  // namespace rcassi
