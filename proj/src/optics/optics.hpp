#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "core/cube.hpp"
#include "core/grid.hpp"

namespace rcassi {

/// Per-channel lateral shift along x, in whole detector pixels:
/// shift(k) = (k - reference_channel) * shift_per_channel.
struct DispersionModel {
  std::int32_t shift_per_channel = 1;
  std::uint32_t reference_channel = 0;

  std::int64_t shift(std::uint32_t channel) const {
    return (static_cast<std::int64_t>(channel) -
            static_cast<std::int64_t>(reference_channel)) *
           shift_per_channel;
  }
};

/// Binary transmission mask over the extended index range the dispersion
/// sweeps across. Column c of row y stores the value at extended index
/// origin_offset + c, so lookups use values[y * width + (e - origin_offset)].
/// origin_offset is the extended index of detector x = 0 under the most
/// negative lookup, i.e. -max_k shift(k).
struct CodedAperture {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::int32_t origin_offset = 0;
  std::vector<std::uint8_t> values;  // row-major, each {0, 1}

  CodedAperture(std::uint32_t width, std::uint32_t height, std::int32_t origin_offset,
                std::vector<std::uint8_t> values);

  std::uint8_t at(std::int64_t extended_index, std::uint32_t y) const;
};

/// Fixed imaging geometry: scene/detector size, spectral grid, mask, dispersion.
/// The mask extent must match the scene width plus the full dispersion sweep
/// exactly (no wraparound, no padding).
class SystemOperator {
public:
  SystemOperator(std::uint32_t nx, std::uint32_t ny, WavelengthGrid grid,
                 CodedAperture mask, DispersionModel dispersion = {});

  std::uint32_t nx() const { return nx_; }
  std::uint32_t ny() const { return ny_; }
  std::uint32_t channels() const { return grid_.channels(); }
  const WavelengthGrid& grid() const { return grid_; }
  const CodedAperture& mask() const { return mask_; }
  const DispersionModel& dispersion() const { return dispersion_; }

  std::size_t plane_size() const { return static_cast<std::size_t>(nx_) * ny_; }
  std::size_t cube_size() const { return plane_size() * channels(); }

  /// Extended-mask (width, origin_offset) required for a scene width and dispersion.
  static std::pair<std::uint32_t, std::int32_t> mask_extent(std::uint32_t nx,
                                                            std::uint32_t n_channels,
                                                            DispersionModel dispersion = {});

private:
  std::uint32_t nx_;
  std::uint32_t ny_;
  WavelengthGrid grid_;
  CodedAperture mask_;
  DispersionModel dispersion_;
};

/// I(x,y) = sum_k f(x,y,k) * T(x - shift(k), y), accumulated in ascending k.
Measurement forward(const SystemOperator& op, const SpectralCube& cube);

/// (H^T I)(x,y,k) = I(x,y) * T(x - shift(k), y).
SpectralCube adjoint(const SystemOperator& op, const Measurement& meas);

// Raw-buffer variants used inside solver loops; they skip value validation
// and cube/measurement construction. Sizes must match the operator exactly.
void forward_into(const SystemOperator& op, std::span<const double> cube,
                  std::span<double> meas);
void adjoint_into(const SystemOperator& op, std::span<const double> meas,
                  std::span<double> cube);

/// Diagonal of H H^T as an nx*ny image: weight(x,y) = sum_k T(x - shift(k), y).
/// H H^T is exactly diagonal for this operator (each detector pixel reads only
/// its own spatial location), so this is the full Gram matrix.
std::vector<double> diag_hht(const SystemOperator& op);

/// Dense (nx*ny) x (nx*ny*n_channels) matrix of the forward map, row-major.
/// Row index y*nx + x, column index (k*ny + y)*nx + x. Refuses systems whose
/// column count exceeds max_columns.
std::vector<double> build_explicit_matrix(const SystemOperator& op,
                                          std::size_t max_columns = 10000);

/// Additive white Gaussian noise with std = sigma_fraction * max(meas).
/// Deterministic for a fixed seed; sigma_fraction = 0 returns a bitwise copy.
/// The result's noise_sigma records the absolute std that was applied.
Measurement add_noise(const Measurement& meas, double sigma_fraction, std::uint64_t seed);

}  // namespace rcassi
