#include "phantoms/phantoms.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <utility>

#include "core/error.hpp"
#include "core/random.hpp"
#include "phantoms/font.hpp"

namespace rcassi {

CodedAperture random_mask(std::uint32_t nx, std::uint32_t ny, std::uint32_t n_channels,
                          double density, std::uint64_t seed) {
  require(nx >= 1 && ny >= 1 && n_channels >= 1, ErrorCode::invalid_argument,
          "mask dimensions must be at least 1x1x1");
  require(std::isfinite(density) && density >= 0.0 && density <= 1.0,
          ErrorCode::invalid_argument, "mask density must lie in [0, 1]");
  const auto [width, origin] = SystemOperator::mask_extent(nx, n_channels);
  std::mt19937_64 rng(seed);
  std::vector<std::uint8_t> values(static_cast<std::size_t>(width) * ny);
  for (auto& v : values) v = uniform53(rng) < density ? 1 : 0;
  return CodedAperture(width, ny, origin, std::move(values));
}

namespace {

std::vector<double> line_spectrum(const WavelengthGrid& grid, double center_nm,
                                  double fwhm_nm) {
  require(std::isfinite(center_nm), ErrorCode::invalid_argument,
          "glyph wavelength must be finite");
  require(center_nm >= grid.front() && center_nm <= grid.back(),
          ErrorCode::invalid_argument, "glyph wavelength lies outside the grid");
  require(std::isfinite(fwhm_nm) && fwhm_nm >= 0.0, ErrorCode::invalid_argument,
          "glyph bandwidth must be nonnegative");

  const std::uint32_t nl = grid.channels();
  std::vector<double> spectrum(nl, 0.0);

  std::uint32_t nearest = 0;
  for (std::uint32_t k = 1; k < nl; ++k) {
    if (std::abs(grid.wavelengths[k] - center_nm) <
        std::abs(grid.wavelengths[nearest] - center_nm)) {
      nearest = k;
    }
  }

  if (fwhm_nm > 0.0) {
    const double sigma = fwhm_nm / (2.0 * std::sqrt(2.0 * std::log(2.0)));
    double peak = 0.0;
    for (std::uint32_t k = 0; k < nl; ++k) {
      const double d = (grid.wavelengths[k] - center_nm) / sigma;
      spectrum[k] = std::exp(-0.5 * d * d);
      peak = std::max(peak, spectrum[k]);
    }
    if (peak > 0.0) {
      for (double& v : spectrum) v /= peak;
      return spectrum;
    }
    // Every sample underflowed (line far narrower than the channel spacing);
    // fall through to the delta limit.
    std::fill(spectrum.begin(), spectrum.end(), 0.0);
  }
  spectrum[nearest] = 1.0;
  return spectrum;
}

}  // namespace

SpectralCube letter_target(std::span<const GlyphSpec> glyphs, std::uint32_t nx,
                           std::uint32_t ny, const WavelengthGrid& grid) {
  SpectralCube cube = SpectralCube::zeros(nx, ny, grid);
  if (glyphs.empty()) return cube;

  const std::uint32_t slots = static_cast<std::uint32_t>(glyphs.size());
  const std::uint32_t slot_w = nx / slots;
  const std::uint32_t margin = 1;
  require(slot_w > 2 * margin && ny > 2 * margin, ErrorCode::invalid_argument,
          "glyphs do not fit the canvas bounds");
  const std::uint32_t scale =
      std::min((slot_w - 2 * margin) / kGlyphCols, (ny - 2 * margin) / kGlyphRows);
  require(scale >= 1, ErrorCode::invalid_argument, "glyphs do not fit the canvas bounds");
  const std::uint32_t block_w = kGlyphCols * scale;
  const std::uint32_t block_h = kGlyphRows * scale;

  for (std::uint32_t g = 0; g < slots; ++g) {
    const auto& bitmap = glyph_bitmap(glyphs[g].character);
    const std::vector<double> spectrum =
        line_spectrum(grid, glyphs[g].center_nm, glyphs[g].fwhm_nm);
    const std::uint32_t x0 = g * slot_w + (slot_w - block_w) / 2;
    const std::uint32_t y0 = (ny - block_h) / 2;
    for (std::uint32_t gy = 0; gy < block_h; ++gy) {
      const std::uint8_t row_bits = bitmap[gy / scale];
      for (std::uint32_t gx = 0; gx < block_w; ++gx) {
        if (!(row_bits >> (kGlyphCols - 1 - gx / scale) & 1)) continue;
        for (std::uint32_t k = 0; k < grid.channels(); ++k) {
          cube.data[cube.index(x0 + gx, y0 + gy, k)] = spectrum[k];
        }
      }
    }
  }
  return cube;
}

MaterialSpectrum::MaterialSpectrum(std::string name_, std::vector<double> values_)
    : name(std::move(name_)), values(std::move(values_)) {
  require(!values.empty(), ErrorCode::invalid_argument, "spectrum must be nonempty");
  for (double v : values) {
    require(std::isfinite(v) && v >= 0.0 && v <= 1.0, ErrorCode::invalid_argument,
            "spectrum values must lie in [0, 1]");
  }
}

namespace {

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

double gaussian_bump(double lambda, double center, double width) {
  const double d = (lambda - center) / width;
  return std::exp(-d * d);
}

double fake_apple_value(double lambda) {
  return clamp01(0.10 + 0.85 * gaussian_bump(lambda, 1050.0, 600.0));
}

double real_apple_value(double lambda) {
  const double base = 0.10 + 0.80 * gaussian_bump(lambda, 1000.0, 500.0);
  const double dip = 1.0 - 0.45 * gaussian_bump(lambda, 940.0, 30.0);
  const double rolloff = 0.35 + 0.65 / (1.0 + std::exp((lambda - 1380.0) / 50.0));
  return clamp01(base * dip * rolloff);
}

std::vector<double> sample_spectrum(const WavelengthGrid& grid, double (*f)(double)) {
  std::vector<double> values(grid.channels());
  for (std::uint32_t k = 0; k < grid.channels(); ++k) values[k] = f(grid.wavelengths[k]);
  return values;
}

}  // namespace

MaterialSpectrum real_apple_spectrum(const WavelengthGrid& grid) {
  return MaterialSpectrum("real-apple", sample_spectrum(grid, real_apple_value));
}

MaterialSpectrum fake_apple_spectrum(const WavelengthGrid& grid) {
  return MaterialSpectrum("fake-apple", sample_spectrum(grid, fake_apple_value));
}

SpectralCube material_scene(std::uint32_t nx, std::uint32_t ny, const WavelengthGrid& grid,
                            const MaterialSpectrum& spectrum_a,
                            const MaterialSpectrum& spectrum_b) {
  require(spectrum_a.values.size() == grid.channels() &&
              spectrum_b.values.size() == grid.channels(),
          ErrorCode::dimension_mismatch, "spectrum length does not match the grid");
  SpectralCube cube = SpectralCube::zeros(nx, ny, grid);

  // Mirrored disks: x <-> nx-1-x maps one onto the other exactly.
  const double cy = 0.5 * (ny - 1);
  const double cx_a = 0.25 * (nx - 1);
  const double cx_b = 0.75 * (nx - 1);
  const double radius = 0.2 * std::min(nx, ny);
  const double r2 = radius * radius;

  for (std::uint32_t y = 0; y < ny; ++y) {
    for (std::uint32_t x = 0; x < nx; ++x) {
      const double dy = y - cy;
      const double da = (x - cx_a) * (x - cx_a) + dy * dy;
      const double db = (x - cx_b) * (x - cx_b) + dy * dy;
      const std::vector<double>* spectrum = nullptr;
      if (da <= r2) {
        spectrum = &spectrum_a.values;
      } else if (db <= r2) {
        spectrum = &spectrum_b.values;
      }
      if (!spectrum) continue;
      for (std::uint32_t k = 0; k < grid.channels(); ++k) {
        cube.data[cube.index(x, y, k)] = (*spectrum)[k];
      }
    }
  }
  return cube;
}

}  // namespace rcassi
