#include "core/grid.hpp"

#include <cmath>
#include <utility>

#include "core/error.hpp"

namespace rcassi {

std::vector<double> linspace(double first, double last, std::uint32_t count) {
  require(count >= 1, ErrorCode::invalid_argument, "linspace: count must be at least 1");
  require(std::isfinite(first) && std::isfinite(last), ErrorCode::invalid_argument,
          "linspace: endpoints must be finite");
  if (count == 1) {
    require(first == last, ErrorCode::invalid_argument,
            "linspace: a single sample requires equal endpoints");
    return {first};
  }
  require(last >= first, ErrorCode::invalid_argument,
          "linspace: last endpoint is below the first");

  const std::uint32_t n1 = count - 1;
  const double step = (last - first) / static_cast<double>(n1);
  std::vector<double> values(count);
  for (std::uint32_t k = 0; k < count; ++k) {
    // Each sample comes from its nearer endpoint; the midpoint (odd counts)
    // is averaged. This keeps the sequence exact under endpoint negation.
    if (2 * static_cast<std::uint64_t>(k) < n1) {
      values[k] = first + static_cast<double>(k) * step;
    } else if (2 * static_cast<std::uint64_t>(k) > n1) {
      values[k] = last - static_cast<double>(n1 - k) * step;
    } else {
      values[k] = 0.5 * (first + last);
    }
  }
  return values;
}

WavelengthGrid::WavelengthGrid(std::vector<double> values) : wavelengths(std::move(values)) {
  require(!wavelengths.empty(), ErrorCode::invalid_argument,
          "wavelength grid must have at least one channel");
  double previous = 0.0;  // wavelengths are positive, so 0 is below any valid entry
  for (double w : wavelengths) {
    require(std::isfinite(w) && w > 0.0, ErrorCode::invalid_argument,
            "wavelengths must be finite and positive");
    require(w > previous, ErrorCode::invalid_argument,
            "wavelengths must be strictly increasing");
    previous = w;
  }
}

WavelengthGrid make_wavelength_grid(double lambda_min_nm, double lambda_max_nm,
                                    std::uint32_t n_channels) {
  require(n_channels >= 1, ErrorCode::invalid_argument, "grid needs at least one channel");
  require(std::isfinite(lambda_min_nm) && std::isfinite(lambda_max_nm),
          ErrorCode::invalid_argument, "grid bounds must be finite");
  require(lambda_max_nm >= lambda_min_nm, ErrorCode::invalid_argument,
          "lambda_max must not be below lambda_min");
  return WavelengthGrid(linspace(lambda_min_nm, lambda_max_nm, n_channels));
}

BandSplit split_bands(const WavelengthGrid& grid, double boundary_nm) {
  require(std::isfinite(boundary_nm), ErrorCode::invalid_argument,
          "split boundary must be finite");
  require(boundary_nm >= grid.front() && boundary_nm <= grid.back(),
          ErrorCode::invalid_argument, "split boundary lies outside the grid range");
  std::uint32_t low = 0;
  while (low < grid.channels() && grid.wavelengths[low] < boundary_nm) ++low;
  return BandSplit{boundary_nm, low, grid.channels() - low};
}

}  // namespace rcassi
