#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "core/cube.hpp"
#include "core/grid.hpp"
#include "optics/optics.hpp"

namespace rcassi {

/// Seeded Bernoulli(density) extended mask sized for an nx-wide scene with
/// n_channels and the default one-pixel-per-channel dispersion.
CodedAperture random_mask(std::uint32_t nx, std::uint32_t ny, std::uint32_t n_channels,
                          double density, std::uint64_t seed);

/// One emissive letter: 5x7 block glyph with a Gaussian line spectrum.
/// fwhm_nm = 0 collapses to a delta at the nearest channel.
struct GlyphSpec {
  char character = '?';
  double center_nm = 0.0;
  double fwhm_nm = 0.0;
};

/// Letter scene: glyphs are laid out left to right in equal slots, centered,
/// scaled to the largest integer block size that fits with a one-pixel
/// margin. Spectra are normalized to peak 1; background is 0. An empty glyph
/// list yields the zero cube.
SpectralCube letter_target(std::span<const GlyphSpec> glyphs, std::uint32_t nx,
                           std::uint32_t ny, const WavelengthGrid& grid);

/// Per-channel reflectance-like spectrum, values in [0, 1].
struct MaterialSpectrum {
  std::string name;
  std::vector<double> values;

  MaterialSpectrum(std::string name, std::vector<double> values);
};

/// Smooth broadband spectrum with a multiplicative dip over 900-980 nm and
/// suppressed values above 1350 nm.
MaterialSpectrum real_apple_spectrum(const WavelengthGrid& grid);

/// Smooth broadband spectrum without the dip or the long-wave suppression.
MaterialSpectrum fake_apple_spectrum(const WavelengthGrid& grid);

/// Two-disk scene: spectrum_a fills a disk in the left half, spectrum_b a
/// mirrored disk in the right half, background 0.
SpectralCube material_scene(std::uint32_t nx, std::uint32_t ny, const WavelengthGrid& grid,
                            const MaterialSpectrum& spectrum_a,
                            const MaterialSpectrum& spectrum_b);

}  // namespace rcassi
