#include "rcassi.h"

#include <algorithm>
#include <cstring>
#include <new>
#include <string>
#include <utility>
#include <vector>

#include "core/cube.hpp"
#include "core/error.hpp"
#include "core/grid.hpp"
#include "io/io.hpp"
#include "metrics/metrics.hpp"
#include "optics/optics.hpp"
#include "phantoms/phantoms.hpp"
#include "solvers/solvers.hpp"
#include "solvers/tv.hpp"

struct rcassi_cube {
  rcassi::SpectralCube value;
};
struct rcassi_mask {
  rcassi::CodedAperture value;
};
struct rcassi_measurement {
  rcassi::Measurement value;
};
struct rcassi_operator {
  rcassi::SystemOperator value;
};
struct rcassi_report {
  rcassi::RunReport value;
};

namespace {

thread_local std::string t_last_error;

rcassi_status status_of(rcassi::ErrorCode code) {
  switch (code) {
    case rcassi::ErrorCode::invalid_argument: return RCASSI_ERROR_INVALID_ARGUMENT;
    case rcassi::ErrorCode::dimension_mismatch: return RCASSI_ERROR_DIMENSION_MISMATCH;
    case rcassi::ErrorCode::io_error: return RCASSI_ERROR_IO;
    case rcassi::ErrorCode::format_error: return RCASSI_ERROR_FORMAT;
    case rcassi::ErrorCode::numeric_error: return RCASSI_ERROR_NUMERIC;
  }
  return RCASSI_ERROR_INTERNAL;
}

template <typename Fn>
rcassi_status guarded(Fn&& fn) {
  try {
    fn();
    return RCASSI_OK;
  } catch (const rcassi::Error& e) {
    t_last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    t_last_error = "out of memory";
    return RCASSI_ERROR_INTERNAL;
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return RCASSI_ERROR_INTERNAL;
  } catch (...) {
    t_last_error = "unknown failure";
    return RCASSI_ERROR_INTERNAL;
  }
}

// Argument screen shared by every entry point: each name maps to a pointer
// that must be non-null.
bool check_args(std::initializer_list<std::pair<const void*, const char*>> args) {
  for (const auto& [ptr, name] : args) {
    if (ptr == nullptr) {
      t_last_error = std::string(name) + " must not be null";
      return false;
    }
  }
  return true;
}

rcassi::WavelengthGrid grid_from(const double* wavelengths, std::uint32_t count) {
  return rcassi::WavelengthGrid(std::vector<double>(wavelengths, wavelengths + count));
}

rcassi::TwistConfig to_cpp(const rcassi_twist_config* config) {
  rcassi::TwistConfig cfg;
  if (config != nullptr) {
    if (config->tau >= 0.0) cfg.tau = config->tau;
    cfg.alpha = config->alpha;
    cfg.beta = config->beta;
    cfg.max_iters = config->max_iters;
    cfg.rel_obj_tol = config->rel_obj_tol;
    cfg.tv_inner_iters = config->tv_inner_iters;
  }
  return cfg;
}

rcassi::GapTvConfig to_cpp(const rcassi_gaptv_config* config) {
  rcassi::GapTvConfig cfg;
  if (config != nullptr) {
    if (config->tv_weight >= 0.0) cfg.tv_weight = config->tv_weight;
    cfg.max_iters = config->max_iters;
    cfg.tv_inner_iters = config->tv_inner_iters;
  }
  return cfg;
}

const rcassi::SolveReport* solve_of(const rcassi_report* report) {
  if (report == nullptr || !report->value.solve.has_value()) {
    t_last_error = "report holds no solve data";
    return nullptr;
  }
  return &*report->value.solve;
}

}  // namespace

extern "C" {

const char* rcassi_version(void) { return "0.1.0"; }

const char* rcassi_last_error(void) { return t_last_error.c_str(); }

/* ---- wavelength grids ------------------------------------------------- */

rcassi_status rcassi_make_wavelength_grid(double min_nm, double max_nm,
                                          uint32_t count, double* out) {
  if (!check_args({{out, "out"}})) return RCASSI_ERROR_INVALID_ARGUMENT;
  return guarded([&] {
    const auto grid = rcassi::make_wavelength_grid(min_nm, max_nm, count);
    std::copy(grid.wavelengths.begin(), grid.wavelengths.end(), out);
  });
}

rcassi_status rcassi_split_bands(const double* wavelengths, uint32_t count,
                                 double boundary_nm, uint32_t* out_low_count,
                                 uint32_t* out_high_count) {
  if (!check_args({{wavelengths, "wavelengths"},
                   {out_low_count, "out_low_count"},
                   {out_high_count, "out_high_count"}})) {
    return RCASSI_ERROR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    const auto split = rcassi::split_bands(grid_from(wavelengths, count), boundary_nm);
    *out_low_count = split.low_count;
    *out_high_count = split.high_count;
  });
}

/* ---- spectral cubes ---------------------------------------------------- */

rcassi_status rcassi_cube_create(uint32_t nx, uint32_t ny, uint32_t n_lambda,
                                 const double* wavelengths, const double* data,
                                 rcassi_cube** out) {
  if (!check_args({{wavelengths, "wavelengths"}, {out, "out"}})) {
    return RCASSI_ERROR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    auto grid = grid_from(wavelengths, n_lambda);
    if (data == nullptr) {
      *out = new rcassi_cube{rcassi::SpectralCube::zeros(nx, ny, std::move(grid))};
    } else {
      const std::size_t n = static_cast<std::size_t>(nx) * ny * n_lambda;
      *out = new rcassi_cube{rcassi::SpectralCube(
          nx, ny, std::move(grid), std::vector<double>(data, data + n))};
    }
  });
}

void rcassi_cube_destroy(rcassi_cube* cube) { delete cube; }

rcassi_status rcassi_cube_dims(const rcassi_cube* cube, uint32_t* out_nx,
                               uint32_t* out_ny, uint32_t* out_n_lambda) {
  if (!check_args({{cube, "cube"},
                   {out_nx, "out_nx"},
                   {out_ny, "out_ny"},
                   {out_n_lambda, "out_n_lambda"}})) {
    return RCASSI_ERROR_INVALID_ARGUMENT;
  }
  *out_nx = cube->value.nx;
  *out_ny = cube->value.ny;
  *out_n_lambda = cube->value.channels();
  return RCASSI_OK;
}

rcassi_status rcassi_cube_wavelengths(const rcassi_cube* cube, double* out) {
  if (!check_args({{cube, "cube"}, {out, "out"}})) return RCASSI_ERROR_INVALID_ARGUMENT;
  const auto& w = cube->value.grid.wavelengths;
  std::copy(w.begin(), w.end(), out);
  return RCASSI_OK;
}

rcassi_status rcassi_cube_data(const rcassi_cube* cube, double* out) {
  if (!check_args({{cube, "cube"}, {out, "out"}})) return RCASSI_ERROR_INVALID_ARGUMENT;
  std::copy(cube->value.data.begin(), cube->value.data.end(), out);
  return RCASSI_OK;
}

rcassi_status rcassi_cube_read(const char* path, rcassi_cube** out) {
  if (!check_args({{path, "path"}, {out, "out"}})) return RCASSI_ERROR_INVALID_ARGUMENT;
  return guarded([&] { *out = new rcassi_cube{rcassi::read_cube(path)}; });
}

rcassi_status rcassi_cube_write(const rcassi_cube* cube, const char* path) {
  if (!check_args({{cube, "cube"}, {path, "path"}})) return RCASSI_ERROR_INVALID_ARGUMENT;
  return guarded([&] { rcassi::write_cube(cube->value, path); });
}

rcassi_status rcassi_slice_bands(const rcassi_cube* cube, uint32_t first_band,
                                 uint32_t band_count, rcassi_cube** out) {
  if (!check_args({{cube, "cube"}, {out, "out"}})) return RCASSI_ERROR_INVALID_ARGUMENT;
  return guarded([&] {
    *out = new rcassi_cube{rcassi::slice_bands(cube->value, first_band, band_count)};
  });
}

rcassi_status rcassi_stitch_cubes(const rcassi_cube* low, const rcassi_cube* high,
                                  rcassi_cube** out) {
  if (!check_args({{low, "low"}, {high, "high"}, {out, "out"}})) {
    return RCASSI_ERROR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    *out = new rcassi_cube{rcassi::stitch_cubes(low->value, high->value)};
  });
}

rcassi_status rcassi_clamp_nonnegative(const rcassi_cube* cube, rcassi_cube** out) {
  if (!check_args({{cube, "cube"}, {out, "out"}})) return RCASSI_ERROR_INVALID_ARGUMENT;
  return guarded([&] {
    *out = new rcassi_cube{rcassi::clamp_nonnegative(cube->value)};
  });
}

/* ---- coded apertures --------------------------------------------------- */

rcassi_status rcassi_mask_create(uint32_t width, uint32_t height,
                                 int32_t origin_offset, const uint8_t* values,
                                 rcassi_mask** out) {
  if (!check_args({{values, "values"}, {out, "out"}})) {
    return RCASSI_ERROR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    const std::size_t n = static_cast<std::size_t>(width) * height;
    *out = new rcassi_mask{rcassi::CodedAperture(
        width, height, origin_offset, std::vector<std::uint8_t>(values, values + n))};
  });
}

void rcassi_mask_destroy(rcassi_mask* mask) { delete mask; }

rcassi_status rcassi_mask_dims(const rcassi_mask* mask, uint32_t* out_width,
                               uint32_t* out_height, int32_t* out_origin_offset) {
  if (!check_args({{mask, "mask"},
                   {out_width, "out_width"},
                   {out_height, "out_height"},
                   {out_origin_offset, "out_origin_offset"}})) {
    return RCASSI_ERROR_INVALID_ARGUMENT;
  }
  *out_width = mask->value.width;
  *out_height = mask->value.height;
  *out_origin_offset = mask->value.origin_offset;
  return RCASSI_OK;
}

rcassi_status rcassi_mask_values(const rcassi_mask* mask, uint8_t* out) {
  if (!check_args({{mask, "mask"}, {out, "out"}})) return RCASSI_ERROR_INVALID_ARGUMENT;
  std::copy(mask->value.values.begin(), mask->value.values.end(), out);
  return RCASSI_OK;
}

rcassi_status rcassi_mask_read(const char* path, rcassi_mask** out) {
  if (!check_args({{path, "path"}, {out, "out"}})) return RCASSI_ERROR_INVALID_ARGUMENT;
  return guarded([&] { *out = new rcassi_mask{rcassi::read_mask(path)}; });
}

rcassi_status rcassi_mask_write(const rcassi_mask* mask, const char* path) {
  if (!check_args({{mask, "mask"}, {path, "path"}})) return RCASSI_ERROR_INVALID_ARGUMENT;
  return guarded([&] { rcassi::write_mask(mask->value, path); });
}

rcassi_status rcassi_mask_extent(uint32_t nx, uint32_t n_lambda,
                                 uint32_t* out_width, int32_t* out_origin_offset) {
  if (!check_args({{out_width, "out_width"},
                   {out_origin_offset, "out_origin_offset"}})) {
    return RCASSI_ERROR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    rcassi::require(nx >= 1 && n_lambda >= 1, rcassi::ErrorCode::invalid_argument,
                    "dimensions must be at least 1");
    const auto [width, origin] = rcassi::SystemOperator::mask_extent(nx, n_lambda);
    *out_width = width;
    *out_origin_offset = origin;
  });
}

rcassi_status rcassi_random_mask(uint32_t nx, uint32_t ny, uint32_t n_lambda,
                                 double density, uint64_t seed, rcassi_mask** out) {
  if (!check_args({{out, "out"}})) return RCASSI_ERROR_INVALID_ARGUMENT;
  return guarded([&] {
    *out = new rcassi_mask{rcassi::random_mask(nx, ny, n_lambda, density, seed)};
  });
}

/* ---- detector measurements --------------------------------------------- */

rcassi_status rcassi_measurement_create(uint32_t nx, uint32_t ny,
                                        const double* data,
                                        rcassi_measurement** out) {
  if (!check_args({{data, "data"}, {out, "out"}})) return RCASSI_ERROR_INVALID_ARGUMENT;
  return guarded([&] {
    const std::size_t n = static_cast<std::size_t>(nx) * ny;
    *out = new rcassi_measurement{
        rcassi::Measurement(nx, ny, std::vector<double>(data, data + n))};
  });
}

void rcassi_measurement_destroy(rcassi_measurement* meas) { delete meas; }

rcassi_status rcassi_measurement_dims(const rcassi_measurement* meas,
                                      uint32_t* out_nx, uint32_t* out_ny) {
  if (!check_args({{meas, "measurement"}, {out_nx, "out_nx"}, {out_ny, "out_ny"}})) {
    return RCASSI_ERROR_INVALID_ARGUMENT;
  }
  *out_nx = meas->value.nx;
  *out_ny = meas->value.ny;
  return RCASSI_OK;
}

rcassi_status rcassi_measurement_data(const rcassi_measurement* meas, double* out) {
  if (!check_args({{meas, "measurement"}, {out, "out"}})) {
    return RCASSI_ERROR_INVALID_ARGUMENT;
  }
  std::copy(meas->value.data.begin(), meas->value.data.end(), out);
  return RCASSI_OK;
}

rcassi_status rcassi_measurement_noise_sigma(const rcassi_measurement* meas,
                                             double* out) {
  if (!check_args({{meas, "measurement"}, {out, "out"}})) {
    return RCASSI_ERROR_INVALID_ARGUMENT;
  }
  *out = meas->value.noise_sigma;
  return RCASSI_OK;
}

rcassi_status rcassi_measurement_read(const char* path, rcassi_measurement** out) {
  if (!check_args({{path, "path"}, {out, "out"}})) return RCASSI_ERROR_INVALID_ARGUMENT;
  return guarded([&] {
    *out = new rcassi_measurement{rcassi::read_measurement(path)};
  });
}

rcassi_status rcassi_measurement_write(const rcassi_measurement* meas,
                                       const char* path) {
  if (!check_args({{meas, "measurement"}, {path, "path"}})) {
    return RCASSI_ERROR_INVALID_ARGUMENT;
  }
  return guarded([&] { rcassi::write_measurement(meas->value, path); });
}

rcassi_status rcassi_add_noise(const rcassi_measurement* meas,
                               double sigma_fraction, uint64_t seed,
                               rcassi_measurement** out) {
  if (!check_args({{meas, "measurement"}, {out, "out"}})) {
    return RCASSI_ERROR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    *out = new rcassi_measurement{rcassi::add_noise(meas->value, sigma_fraction, seed)};
  });
}

/* ---- system operator --------------------------------------------------- */

rcassi_status rcassi_operator_create(uint32_t nx, uint32_t ny, uint32_t n_lambda,
                                     const double* wavelengths,
                                     const rcassi_mask* mask,
                                     rcassi_operator** out) {
  if (!check_args({{wavelengths, "wavelengths"}, {mask, "mask"}, {out, "out"}})) {
    return RCASSI_ERROR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    *out = new rcassi_operator{rcassi::SystemOperator(
        nx, ny, grid_from(wavelengths, n_lambda), mask->value)};
  });
}

void rcassi_operator_destroy(rcassi_operator* op) { delete op; }

rcassi_status rcassi_operator_dims(const rcassi_operator* op, uint32_t* out_nx,
                                   uint32_t* out_ny, uint32_t* out_n_lambda) {
  if (!check_args({{op, "operator"},
                   {out_nx, "out_nx"},
                   {out_ny, "out_ny"},
                   {out_n_lambda, "out_n_lambda"}})) {
    return RCASSI_ERROR_INVALID_ARGUMENT;
  }
  *out_nx = op->value.nx();
  *out_ny = op->value.ny();
  *out_n_lambda = op->value.channels();
  return RCASSI_OK;
}

rcassi_status rcassi_forward(const rcassi_operator* op, const rcassi_cube* cube,
                             rcassi_measurement** out) {
  if (!check_args({{op, "operator"}, {cube, "cube"}, {out, "out"}})) {
    return RCASSI_ERROR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    *out = new rcassi_measurement{rcassi::forward(op->value, cube->value)};
  });
}

rcassi_status rcassi_adjoint(const rcassi_operator* op,
                             const rcassi_measurement* meas, rcassi_cube** out) {
  if (!check_args({{op, "operator"}, {meas, "measurement"}, {out, "out"}})) {
    return RCASSI_ERROR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    *out = new rcassi_cube{rcassi::adjoint(op->value, meas->value)};
  });
}

rcassi_status rcassi_diag_hht(const rcassi_operator* op, double* out) {
  if (!check_args({{op, "operator"}, {out, "out"}})) return RCASSI_ERROR_INVALID_ARGUMENT;
  return guarded([&] {
    const auto diag = rcassi::diag_hht(op->value);
    std::copy(diag.begin(), diag.end(), out);
  });
}

rcassi_status rcassi_explicit_matrix(const rcassi_operator* op,
                                     uint32_t max_columns, double* out) {
  if (!check_args({{op, "operator"}, {out, "out"}})) return RCASSI_ERROR_INVALID_ARGUMENT;
  return guarded([&] {
    const auto matrix = rcassi::build_explicit_matrix(op->value, max_columns);
    std::copy(matrix.begin(), matrix.end(), out);
  });
}

/* ---- phantoms ----------------------------------------------------------- */

rcassi_status rcassi_letter_target(const char* characters,
                                   const double* centers_nm,
                                   const double* fwhms_nm, uint32_t glyph_count,
                                   uint32_t nx, uint32_t ny,
                                   const double* wavelengths, uint32_t n_lambda,
                                   rcassi_cube** out) {
  if (!check_args({{wavelengths, "wavelengths"}, {out, "out"}})) {
    return RCASSI_ERROR_INVALID_ARGUMENT;
  }
  if (glyph_count > 0 &&
      !check_args({{characters, "characters"},
                   {centers_nm, "centers_nm"},
                   {fwhms_nm, "fwhms_nm"}})) {
    return RCASSI_ERROR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    std::vector<rcassi::GlyphSpec> glyphs(glyph_count);
    for (uint32_t i = 0; i < glyph_count; ++i) {
      glyphs[i] = {characters[i], centers_nm[i], fwhms_nm[i]};
    }
    *out = new rcassi_cube{
        rcassi::letter_target(glyphs, nx, ny, grid_from(wavelengths, n_lambda))};
  });
}

rcassi_status rcassi_material_scene(uint32_t nx, uint32_t ny,
                                    const double* wavelengths, uint32_t n_lambda,
                                    rcassi_cube** out) {
  if (!check_args({{wavelengths, "wavelengths"}, {out, "out"}})) {
    return RCASSI_ERROR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    const auto grid = grid_from(wavelengths, n_lambda);
    *out = new rcassi_cube{rcassi::material_scene(
        nx, ny, grid, rcassi::real_apple_spectrum(grid),
        rcassi::fake_apple_spectrum(grid))};
  });
}

rcassi_status rcassi_builtin_spectrum(const char* name, const double* wavelengths,
                                      uint32_t count, double* out) {
  if (!check_args({{name, "name"}, {wavelengths, "wavelengths"}, {out, "out"}})) {
    return RCASSI_ERROR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    const auto grid = grid_from(wavelengths, count);
    rcassi::MaterialSpectrum spectrum = [&] {
      const std::string which = name;
      if (which == "real_apple") return rcassi::real_apple_spectrum(grid);
      if (which == "fake_apple") return rcassi::fake_apple_spectrum(grid);
      rcassi::fail(rcassi::ErrorCode::invalid_argument,
                   "unknown spectrum '" + which + "' (real_apple, fake_apple)");
    }();
    std::copy(spectrum.values.begin(), spectrum.values.end(), out);
  });
}

/* ---- total variation and objective -------------------------------------- */

rcassi_status rcassi_total_variation(const double* image, uint32_t nx,
                                     uint32_t ny, double* out) {
  if (!check_args({{image, "image"}, {out, "out"}})) return RCASSI_ERROR_INVALID_ARGUMENT;
  return guarded([&] {
    *out = rcassi::total_variation(
        std::span<const double>(image, static_cast<std::size_t>(nx) * ny), nx, ny);
  });
}

rcassi_status rcassi_tv_denoise(const double* image, uint32_t nx, uint32_t ny,
                                double weight, uint32_t inner_iters, double* out) {
  if (!check_args({{image, "image"}, {out, "out"}})) return RCASSI_ERROR_INVALID_ARGUMENT;
  return guarded([&] {
    const auto denoised = rcassi::tv_denoise(
        std::span<const double>(image, static_cast<std::size_t>(nx) * ny), nx, ny,
        weight, inner_iters);
    std::copy(denoised.begin(), denoised.end(), out);
  });
}

rcassi_status rcassi_objective(const rcassi_operator* op,
                               const rcassi_measurement* meas,
                               const rcassi_cube* cube, double tau, double* out) {
  if (!check_args({{op, "operator"},
                   {meas, "measurement"},
                   {cube, "cube"},
                   {out, "out"}})) {
    return RCASSI_ERROR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    *out = rcassi::objective(op->value, meas->value, cube->value, tau);
  });
}

rcassi_status rcassi_default_tv_weight(const rcassi_operator* op,
                                       const rcassi_measurement* meas,
                                       double* out) {
  if (!check_args({{op, "operator"}, {meas, "measurement"}, {out, "out"}})) {
    return RCASSI_ERROR_INVALID_ARGUMENT;
  }
  return guarded([&] { *out = rcassi::default_tv_weight(op->value, meas->value); });
}

/* ---- solvers ------------------------------------------------------------ */

void rcassi_twist_config_init(rcassi_twist_config* config) {
  if (config == nullptr) return;
  const rcassi::TwistConfig defaults;
  config->tau = -1.0;
  config->alpha = defaults.alpha;
  config->beta = defaults.beta;
  config->max_iters = defaults.max_iters;
  config->rel_obj_tol = defaults.rel_obj_tol;
  config->tv_inner_iters = defaults.tv_inner_iters;
}

void rcassi_gaptv_config_init(rcassi_gaptv_config* config) {
  if (config == nullptr) return;
  const rcassi::GapTvConfig defaults;
  config->tv_weight = -1.0;
  config->max_iters = defaults.max_iters;
  config->tv_inner_iters = defaults.tv_inner_iters;
}

rcassi_status rcassi_twist_solve(const rcassi_operator* op,
                                 const rcassi_measurement* meas,
                                 const rcassi_twist_config* config,
                                 rcassi_report* report, rcassi_cube** out) {
  if (!check_args({{op, "operator"}, {meas, "measurement"}, {out, "out"}})) {
    return RCASSI_ERROR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    const rcassi::TwistConfig cfg = to_cpp(config);
    auto [cube, solve] = rcassi::twist_solve(op->value, meas->value, cfg);
    if (report != nullptr) {
      auto& run = report->value;
      run.config_text["algorithm"] = "twist";
      run.config_values["tau"] =
          cfg.tau ? *cfg.tau : rcassi::default_tv_weight(op->value, meas->value);
      run.config_values["alpha"] = cfg.alpha;
      run.config_values["beta"] = cfg.beta;
      run.config_values["max_iters"] = cfg.max_iters;
      run.config_values["rel_obj_tol"] = cfg.rel_obj_tol;
      run.config_values["tv_inner_iters"] = cfg.tv_inner_iters;
      run.solve = std::move(solve);
    }
    *out = new rcassi_cube{std::move(cube)};
  });
}

rcassi_status rcassi_gaptv_solve(const rcassi_operator* op,
                                 const rcassi_measurement* meas,
                                 const rcassi_gaptv_config* config,
                                 rcassi_report* report, rcassi_cube** out) {
  if (!check_args({{op, "operator"}, {meas, "measurement"}, {out, "out"}})) {
    return RCASSI_ERROR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    const rcassi::GapTvConfig cfg = to_cpp(config);
    auto [cube, solve] = rcassi::gaptv_solve(op->value, meas->value, cfg);
    if (report != nullptr) {
      auto& run = report->value;
      run.config_text["algorithm"] = "gaptv";
      run.config_values["tv_weight"] =
          cfg.tv_weight ? *cfg.tv_weight
                        : rcassi::default_tv_weight(op->value, meas->value);
      run.config_values["max_iters"] = cfg.max_iters;
      run.config_values["tv_inner_iters"] = cfg.tv_inner_iters;
      run.solve = std::move(solve);
    }
    *out = new rcassi_cube{std::move(cube)};
  });
}

/* ---- metrics ------------------------------------------------------------ */

rcassi_status rcassi_psnr(const rcassi_cube* recon, const rcassi_cube* truth,
                          double* out_db) {
  if (!check_args({{recon, "recon"}, {truth, "truth"}, {out_db, "out_db"}})) {
    return RCASSI_ERROR_INVALID_ARGUMENT;
  }
  return guarded([&] { *out_db = rcassi::psnr(recon->value, truth->value); });
}

rcassi_status rcassi_spectral_correlation(const rcassi_cube* recon,
                                          const rcassi_cube* truth, uint32_t x,
                                          uint32_t y, double* out_r) {
  if (!check_args({{recon, "recon"}, {truth, "truth"}, {out_r, "out_r"}})) {
    return RCASSI_ERROR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    *out_r = rcassi::spectral_correlation(recon->value, truth->value, x, y);
  });
}

/* ---- run reports --------------------------------------------------------- */

rcassi_status rcassi_report_create(rcassi_report** out) {
  if (!check_args({{out, "out"}})) return RCASSI_ERROR_INVALID_ARGUMENT;
  return guarded([&] { *out = new rcassi_report{}; });
}

void rcassi_report_destroy(rcassi_report* report) { delete report; }

rcassi_status rcassi_report_set_config_text(rcassi_report* report,
                                            const char* key, const char* value) {
  if (!check_args({{report, "report"}, {key, "key"}, {value, "value"}})) {
    return RCASSI_ERROR_INVALID_ARGUMENT;
  }
  return guarded([&] { report->value.config_text[key] = value; });
}

rcassi_status rcassi_report_set_config_value(rcassi_report* report,
                                             const char* key, double value) {
  if (!check_args({{report, "report"}, {key, "key"}})) {
    return RCASSI_ERROR_INVALID_ARGUMENT;
  }
  return guarded([&] { report->value.config_values[key] = value; });
}

rcassi_status rcassi_report_set_seed(rcassi_report* report, const char* key,
                                     uint64_t seed) {
  if (!check_args({{report, "report"}, {key, "key"}})) {
    return RCASSI_ERROR_INVALID_ARGUMENT;
  }
  return guarded([&] { report->value.seeds[key] = seed; });
}

rcassi_status rcassi_report_add_warning(rcassi_report* report, const char* text) {
  if (!check_args({{report, "report"}, {text, "text"}})) {
    return RCASSI_ERROR_INVALID_ARGUMENT;
  }
  return guarded([&] { report->value.warnings.push_back(text); });
}

rcassi_status rcassi_report_set_psnr(rcassi_report* report, double psnr_db) {
  if (!check_args({{report, "report"}})) return RCASSI_ERROR_INVALID_ARGUMENT;
  report->value.psnr_db = psnr_db;
  return RCASSI_OK;
}

rcassi_status rcassi_report_add_correlation(rcassi_report* report, uint32_t x,
                                            uint32_t y, double r) {
  if (!check_args({{report, "report"}})) return RCASSI_ERROR_INVALID_ARGUMENT;
  return guarded([&] {
    report->value.correlations.push_back({x, y, r, std::string()});
  });
}

rcassi_status rcassi_report_add_correlation_error(rcassi_report* report,
                                                  uint32_t x, uint32_t y,
                                                  const char* message) {
  if (!check_args({{report, "report"}, {message, "message"}})) {
    return RCASSI_ERROR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    report->value.correlations.push_back({x, y, std::nullopt, message});
  });
}

rcassi_status rcassi_report_iterations(const rcassi_report* report, uint32_t* out) {
  if (!check_args({{out, "out"}})) return RCASSI_ERROR_INVALID_ARGUMENT;
  const auto* solve = solve_of(report);
  if (solve == nullptr) return RCASSI_ERROR_INVALID_ARGUMENT;
  *out = solve->iterations_run;
  return RCASSI_OK;
}

rcassi_status rcassi_report_stop_reason(const rcassi_report* report,
                                        rcassi_stop_reason* out) {
  if (!check_args({{out, "out"}})) return RCASSI_ERROR_INVALID_ARGUMENT;
  const auto* solve = solve_of(report);
  if (solve == nullptr) return RCASSI_ERROR_INVALID_ARGUMENT;
  switch (solve->stop_reason) {
    case rcassi::StopReason::max_iters: *out = RCASSI_STOP_MAX_ITERS; break;
    case rcassi::StopReason::tolerance: *out = RCASSI_STOP_TOLERANCE; break;
    case rcassi::StopReason::diverged: *out = RCASSI_STOP_DIVERGED; break;
    case rcassi::StopReason::degenerate: *out = RCASSI_STOP_DEGENERATE; break;
  }
  return RCASSI_OK;
}

rcassi_status rcassi_report_objective_trace(const rcassi_report* report,
                                            double* out) {
  if (!check_args({{out, "out"}})) return RCASSI_ERROR_INVALID_ARGUMENT;
  const auto* solve = solve_of(report);
  if (solve == nullptr) return RCASSI_ERROR_INVALID_ARGUMENT;
  std::copy(solve->objective_trace.begin(), solve->objective_trace.end(), out);
  return RCASSI_OK;
}

rcassi_status rcassi_report_residual_trace(const rcassi_report* report,
                                           double* out) {
  if (!check_args({{out, "out"}})) return RCASSI_ERROR_INVALID_ARGUMENT;
  const auto* solve = solve_of(report);
  if (solve == nullptr) return RCASSI_ERROR_INVALID_ARGUMENT;
  std::copy(solve->residual_trace.begin(), solve->residual_trace.end(), out);
  return RCASSI_OK;
}

rcassi_status rcassi_report_write_json(const rcassi_report* report,
                                       const char* path) {
  if (!check_args({{report, "report"}, {path, "path"}})) {
    return RCASSI_ERROR_INVALID_ARGUMENT;
  }
  return guarded([&] { rcassi::write_report(report->value, path); });
}

rcassi_status rcassi_report_to_json(const rcassi_report* report, char** out_text) {
  if (!check_args({{report, "report"}, {out_text, "out_text"}})) {
    return RCASSI_ERROR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    const std::string text = rcassi::report_to_json(report->value);
    char* buffer = new char[text.size() + 1];
    std::memcpy(buffer, text.c_str(), text.size() + 1);
    *out_text = buffer;
  });
}

void rcassi_text_destroy(char* text) { delete[] text; }

/* ---- file exports --------------------------------------------------------- */

rcassi_status rcassi_export_band_pgm(const rcassi_cube* cube, uint32_t channel,
                                     const char* path, int* out_was_constant) {
  if (!check_args({{cube, "cube"}, {path, "path"}})) {
    return RCASSI_ERROR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    const bool constant = rcassi::export_band_pgm(cube->value, channel, path);
    if (out_was_constant != nullptr) *out_was_constant = constant ? 1 : 0;
  });
}

rcassi_status rcassi_export_spectra_csv(const rcassi_cube* cube,
                                        const uint32_t* xs, const uint32_t* ys,
                                        uint32_t count, const char* path) {
  if (!check_args({{cube, "cube"}, {xs, "xs"}, {ys, "ys"}, {path, "path"}})) {
    return RCASSI_ERROR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    std::vector<rcassi::ProbePoint> points(count);
    for (uint32_t i = 0; i < count; ++i) points[i] = {xs[i], ys[i]};
    rcassi::export_spectra_csv(cube->value, points, path);
  });
}

}  // extern "C"
