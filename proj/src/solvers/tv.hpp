#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace rcassi {

/// Isotropic total variation of one band image:
/// sum over pixels of sqrt(dx^2 + dy^2) with forward differences and zero
/// gradient at the far edges. Row-major, index = y * nx + x.
double total_variation(std::span<const double> image, std::uint32_t nx, std::uint32_t ny);

/// Approximate proximal map of weight * TV via Chambolle's dual projection,
/// run for a fixed number of iterations (dual step 1/4). weight = 0 returns
/// the input bitwise; the map is deterministic and nonexpansive.
std::vector<double> tv_denoise(std::span<const double> image, std::uint32_t nx,
                               std::uint32_t ny, double weight, std::uint32_t inner_iters);

}  // namespace rcassi
