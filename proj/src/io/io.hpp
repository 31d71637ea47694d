#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "core/cube.hpp"
#include "optics/optics.hpp"
#include "solvers/solvers.hpp"

namespace rcassi {

// Binary formats are little-endian with no padding.
//
// HSC cube: "HSC1", u32 nx, u32 ny, u32 n_lambda, n_lambda f64 wavelengths
// (nm), then nx*ny*n_lambda f32 samples in cube layout. A detector
// measurement is an HSC with n_lambda = 1; its wavelength slot carries the
// placeholder 1.0 since a detector image has no wavelength of its own.
//
// MSK mask: "MSK1", u32 width, u32 height, i32 origin_offset, then
// width*height bytes, each 0 or 1, row-major.

void write_cube(const SpectralCube& cube, const std::string& path);
SpectralCube read_cube(const std::string& path);

void write_mask(const CodedAperture& mask, const std::string& path);
CodedAperture read_mask(const std::string& path);

void write_measurement(const Measurement& meas, const std::string& path);
Measurement read_measurement(const std::string& path);

/// 8-bit binary PGM of one band, min-max normalized per band. A constant band
/// exports as all zeros; the return value reports that condition so callers
/// can attach a warning.
bool export_band_pgm(const SpectralCube& cube, std::uint32_t channel,
                     const std::string& path);

struct ProbePoint {
  std::uint32_t x = 0;
  std::uint32_t y = 0;
};

/// CSV with header "wavelength_nm,p1,p2,..." and one row per channel, full
/// double precision. Requires a nonempty in-bounds point list.
void export_spectra_csv(const SpectralCube& cube, std::span<const ProbePoint> points,
                        const std::string& path);

/// Everything a run wants to persist about itself. Serialized as JSON with
/// stable field names; rewriting an identical report yields identical bytes,
/// so two runs differ only in wall_time_s.
struct RunReport {
  struct Correlation {
    std::uint32_t x = 0;
    std::uint32_t y = 0;
    std::optional<double> r;  // unset: see error
    std::string error;
  };

  std::optional<SolveReport> solve;
  std::optional<double> psnr_db;
  std::vector<Correlation> correlations;
  std::map<std::string, std::string> config_text;
  std::map<std::string, double> config_values;
  std::map<std::string, std::uint64_t> seeds;
  std::vector<std::string> warnings;
};

void write_report(const RunReport& report, const std::string& path);

/// The exact JSON text write_report would produce.
std::string report_to_json(const RunReport& report);

}  // namespace rcassi
