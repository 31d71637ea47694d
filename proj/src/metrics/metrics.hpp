#pragma once

#include <cstdint>

#include "core/cube.hpp"

namespace rcassi {

/// Pearson correlation between the two cubes' spectra at pixel (x, y),
/// clamped to [-1, 1]. Errors if either spectrum has zero variance.
double spectral_correlation(const SpectralCube& recon, const SpectralCube& truth,
                            std::uint32_t x, std::uint32_t y);

/// 10 * log10(peak^2 / MSE) with peak = max(truth). Returns +infinity when
/// the cubes match exactly; errors when the truth has no positive values.
double psnr(const SpectralCube& recon, const SpectralCube& truth);

}  // namespace rcassi
