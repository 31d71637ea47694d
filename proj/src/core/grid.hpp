#pragma once

#include <cstdint>
#include <vector>

namespace rcassi {

/// Symmetric linear spacing, inclusive of both endpoints.
/// Values are computed from the nearer endpoint so that negating both
/// endpoints yields the exact bitwise mirror of the sequence.
std::vector<double> linspace(double first, double last, std::uint32_t count);

/// Strictly increasing channel-center wavelengths in nanometers.
struct WavelengthGrid {
  std::vector<double> wavelengths;

  explicit WavelengthGrid(std::vector<double> values);

  std::uint32_t channels() const { return static_cast<std::uint32_t>(wavelengths.size()); }
  double front() const { return wavelengths.front(); }
  double back() const { return wavelengths.back(); }

  bool operator==(const WavelengthGrid& other) const = default;
};

/// Equally spaced grid over [lambda_min_nm, lambda_max_nm].
/// n_channels == 1 requires equal endpoints.
WavelengthGrid make_wavelength_grid(double lambda_min_nm, double lambda_max_nm,
                                    std::uint32_t n_channels);

/// Contiguous two-way split of a grid at a boundary wavelength.
/// Channels with wavelength >= boundary belong to the high side, so a channel
/// centered exactly on the boundary goes high. The low side is [0, low_count),
/// the high side [low_count, low_count + high_count); either side may be empty
/// when the boundary coincides with an endpoint.
struct BandSplit {
  double boundary_nm = 0.0;
  std::uint32_t low_count = 0;
  std::uint32_t high_count = 0;
};

/// Boundary must lie within [front, back] of the grid.
BandSplit split_bands(const WavelengthGrid& grid, double boundary_nm);

}  // namespace rcassi
