/* rcassi: simulation and reconstruction for reflective coded-aperture
 * snapshot spectral imaging.
 *
 * Conventions:
 *   - Every fallible function returns rcassi_status; out-parameters are
 *     written only on RCASSI_OK.
 *   - rcassi_last_error() returns the message of the most recent failing
 *     call in the calling thread (empty string if none so far).
 *   - Objects returned through rcassi_*_create/read/solve calls are owned
 *     by the caller and released with the matching _destroy function.
 *   - Cube samples are band-major: index = (k * ny + y) * nx + x.
 *     Detector images are row-major: index = y * nx + x.
 */
#ifndef RCASSI_H
#define RCASSI_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rcassi_status {
  RCASSI_OK = 0,
  RCASSI_ERROR_INVALID_ARGUMENT = 1,
  RCASSI_ERROR_DIMENSION_MISMATCH = 2,
  RCASSI_ERROR_IO = 3,
  RCASSI_ERROR_FORMAT = 4,
  RCASSI_ERROR_NUMERIC = 5,
  RCASSI_ERROR_INTERNAL = 6
} rcassi_status;

typedef enum rcassi_stop_reason {
  RCASSI_STOP_MAX_ITERS = 0,
  RCASSI_STOP_TOLERANCE = 1,
  RCASSI_STOP_DIVERGED = 2,
  RCASSI_STOP_DEGENERATE = 3
} rcassi_stop_reason;

typedef struct rcassi_cube rcassi_cube;
typedef struct rcassi_mask rcassi_mask;
typedef struct rcassi_measurement rcassi_measurement;
typedef struct rcassi_operator rcassi_operator;
typedef struct rcassi_report rcassi_report;

const char* rcassi_version(void);
const char* rcassi_last_error(void);

/* ---- wavelength grids ------------------------------------------------- */

/* Fills out[count] with an evenly spaced grid from min_nm to max_nm, both
 * endpoints exact. Requires 0 < min_nm < max_nm (equal allowed iff count
 * is 1) and count >= 1. */
rcassi_status rcassi_make_wavelength_grid(double min_nm, double max_nm,
                                          uint32_t count, double* out);

/* Partition of a strictly increasing grid at boundary_nm: low gets the
 * channels strictly below the boundary, high the rest. The boundary must
 * lie inside [first, last]. */
rcassi_status rcassi_split_bands(const double* wavelengths, uint32_t count,
                                 double boundary_nm, uint32_t* out_low_count,
                                 uint32_t* out_high_count);

/* ---- spectral cubes ---------------------------------------------------- */

/* data may be NULL for an all-zero cube; otherwise it holds
 * nx*ny*n_lambda finite samples in cube layout. */
rcassi_status rcassi_cube_create(uint32_t nx, uint32_t ny, uint32_t n_lambda,
                                 const double* wavelengths, const double* data,
                                 rcassi_cube** out);
void rcassi_cube_destroy(rcassi_cube* cube);
rcassi_status rcassi_cube_dims(const rcassi_cube* cube, uint32_t* out_nx,
                               uint32_t* out_ny, uint32_t* out_n_lambda);
rcassi_status rcassi_cube_wavelengths(const rcassi_cube* cube, double* out);
rcassi_status rcassi_cube_data(const rcassi_cube* cube, double* out);

rcassi_status rcassi_cube_read(const char* path, rcassi_cube** out);
rcassi_status rcassi_cube_write(const rcassi_cube* cube, const char* path);

rcassi_status rcassi_slice_bands(const rcassi_cube* cube, uint32_t first_band,
                                 uint32_t band_count, rcassi_cube** out);
rcassi_status rcassi_stitch_cubes(const rcassi_cube* low, const rcassi_cube* high,
                                  rcassi_cube** out);
rcassi_status rcassi_clamp_nonnegative(const rcassi_cube* cube, rcassi_cube** out);

/* ---- coded apertures --------------------------------------------------- */

/* values holds width*height bytes, each 0 or 1, row-major over the extended
 * mask. origin_offset is the extended-plane index of stored column 0. */
rcassi_status rcassi_mask_create(uint32_t width, uint32_t height,
                                 int32_t origin_offset, const uint8_t* values,
                                 rcassi_mask** out);
void rcassi_mask_destroy(rcassi_mask* mask);
rcassi_status rcassi_mask_dims(const rcassi_mask* mask, uint32_t* out_width,
                               uint32_t* out_height, int32_t* out_origin_offset);
rcassi_status rcassi_mask_values(const rcassi_mask* mask, uint8_t* out);

rcassi_status rcassi_mask_read(const char* path, rcassi_mask** out);
rcassi_status rcassi_mask_write(const rcassi_mask* mask, const char* path);

/* Extended-mask extent for an nx-wide scene with n_lambda channels under
 * the default one-pixel-per-channel dispersion. */
rcassi_status rcassi_mask_extent(uint32_t nx, uint32_t n_lambda,
                                 uint32_t* out_width, int32_t* out_origin_offset);

/* Bernoulli(density) mask sized by rcassi_mask_extent, reproducible for a
 * given seed across platforms. */
rcassi_status rcassi_random_mask(uint32_t nx, uint32_t ny, uint32_t n_lambda,
                                 double density, uint64_t seed, rcassi_mask** out);

/* ---- detector measurements --------------------------------------------- */

rcassi_status rcassi_measurement_create(uint32_t nx, uint32_t ny,
                                        const double* data,
                                        rcassi_measurement** out);
void rcassi_measurement_destroy(rcassi_measurement* meas);
rcassi_status rcassi_measurement_dims(const rcassi_measurement* meas,
                                      uint32_t* out_nx, uint32_t* out_ny);
rcassi_status rcassi_measurement_data(const rcassi_measurement* meas, double* out);
/* Standard deviation of the noise added to this measurement (0 if none). */
rcassi_status rcassi_measurement_noise_sigma(const rcassi_measurement* meas,
                                             double* out);

rcassi_status rcassi_measurement_read(const char* path, rcassi_measurement** out);
rcassi_status rcassi_measurement_write(const rcassi_measurement* meas,
                                       const char* path);

/* Additive white Gaussian noise with std = sigma_fraction * peak signal.
 * sigma_fraction 0 returns an exact copy. */
rcassi_status rcassi_add_noise(const rcassi_measurement* meas,
                               double sigma_fraction, uint64_t seed,
                               rcassi_measurement** out);

/* ---- system operator --------------------------------------------------- */

/* Binds scene dimensions, a wavelength grid, and a coded aperture into the
 * dual-dispersion forward model. The mask extent must match
 * rcassi_mask_extent for (nx, n_lambda). */
rcassi_status rcassi_operator_create(uint32_t nx, uint32_t ny, uint32_t n_lambda,
                                     const double* wavelengths,
                                     const rcassi_mask* mask,
                                     rcassi_operator** out);
void rcassi_operator_destroy(rcassi_operator* op);
rcassi_status rcassi_operator_dims(const rcassi_operator* op, uint32_t* out_nx,
                                   uint32_t* out_ny, uint32_t* out_n_lambda);

rcassi_status rcassi_forward(const rcassi_operator* op, const rcassi_cube* cube,
                             rcassi_measurement** out);
rcassi_status rcassi_adjoint(const rcassi_operator* op,
                             const rcassi_measurement* meas, rcassi_cube** out);

/* Diagonal of H H^T as an nx*ny image (the operator's Gram matrix over
 * detector pixels is exactly diagonal). */
rcassi_status rcassi_diag_hht(const rcassi_operator* op, double* out);

/* Dense matrix of the operator, row index y*nx + x, column index
 * (k*ny + y)*nx + x; out holds (nx*ny) * (nx*ny*n_lambda) doubles.
 * Refused when the column count exceeds max_columns. */
rcassi_status rcassi_explicit_matrix(const rcassi_operator* op,
                                     uint32_t max_columns, double* out);

/* ---- phantoms ----------------------------------------------------------- */

/* Letter scene: glyph i is characters[i] rendered as a flat region with a
 * Gaussian emission line at centers_nm[i], FWHM fwhms_nm[i]. */
rcassi_status rcassi_letter_target(const char* characters,
                                   const double* centers_nm,
                                   const double* fwhms_nm, uint32_t glyph_count,
                                   uint32_t nx, uint32_t ny,
                                   const double* wavelengths, uint32_t n_lambda,
                                   rcassi_cube** out);

/* Two-disk scene carrying the built-in real/fake apple reflectances. */
rcassi_status rcassi_material_scene(uint32_t nx, uint32_t ny,
                                    const double* wavelengths, uint32_t n_lambda,
                                    rcassi_cube** out);

/* Built-in reflectance sampled on a caller grid; name is "real_apple" or
 * "fake_apple". */
rcassi_status rcassi_builtin_spectrum(const char* name, const double* wavelengths,
                                      uint32_t count, double* out);

/* ---- total variation and objective -------------------------------------- */

rcassi_status rcassi_total_variation(const double* image, uint32_t nx,
                                     uint32_t ny, double* out);

/* Chambolle dual-projection denoiser: argmin_u ||u - image||^2/2 + w TV(u).
 * weight 0 copies the input. */
rcassi_status rcassi_tv_denoise(const double* image, uint32_t nx, uint32_t ny,
                                double weight, uint32_t inner_iters, double* out);

/* 0.5 ||meas - H cube||^2 + tau * sum of per-band TV. */
rcassi_status rcassi_objective(const rcassi_operator* op,
                               const rcassi_measurement* meas,
                               const rcassi_cube* cube, double tau, double* out);

/* Default regularization weight: 0.01 * max |H^T meas|. */
rcassi_status rcassi_default_tv_weight(const rcassi_operator* op,
                                       const rcassi_measurement* meas,
                                       double* out);

/* ---- solvers ------------------------------------------------------------ */

typedef struct rcassi_twist_config {
  double tau;              /* < 0 selects the default weight heuristic */
  double alpha;
  double beta;
  uint32_t max_iters;
  double rel_obj_tol;
  uint32_t tv_inner_iters;
} rcassi_twist_config;

typedef struct rcassi_gaptv_config {
  double tv_weight;        /* < 0 selects the default weight heuristic */
  uint32_t max_iters;
  uint32_t tv_inner_iters;
} rcassi_gaptv_config;

void rcassi_twist_config_init(rcassi_twist_config* config);
void rcassi_gaptv_config_init(rcassi_gaptv_config* config);

/* config NULL means defaults. report (optional) receives iteration data and
 * the resolved configuration under config keys. */
rcassi_status rcassi_twist_solve(const rcassi_operator* op,
                                 const rcassi_measurement* meas,
                                 const rcassi_twist_config* config,
                                 rcassi_report* report, rcassi_cube** out);
rcassi_status rcassi_gaptv_solve(const rcassi_operator* op,
                                 const rcassi_measurement* meas,
                                 const rcassi_gaptv_config* config,
                                 rcassi_report* report, rcassi_cube** out);

/* ---- metrics ------------------------------------------------------------ */

/* Peak signal-to-noise ratio against truth's peak; +inf on an exact match. */
rcassi_status rcassi_psnr(const rcassi_cube* recon, const rcassi_cube* truth,
                          double* out_db);

/* Pearson correlation between the two spectra at pixel (x, y), clamped to
 * [-1, 1]. Fails with RCASSI_ERROR_NUMERIC when either spectrum is
 * constant. */
rcassi_status rcassi_spectral_correlation(const rcassi_cube* recon,
                                          const rcassi_cube* truth, uint32_t x,
                                          uint32_t y, double* out_r);

/* ---- run reports --------------------------------------------------------- */

rcassi_status rcassi_report_create(rcassi_report** out);
void rcassi_report_destroy(rcassi_report* report);

rcassi_status rcassi_report_set_config_text(rcassi_report* report,
                                            const char* key, const char* value);
rcassi_status rcassi_report_set_config_value(rcassi_report* report,
                                             const char* key, double value);
rcassi_status rcassi_report_set_seed(rcassi_report* report, const char* key,
                                     uint64_t seed);
rcassi_status rcassi_report_add_warning(rcassi_report* report, const char* text);
rcassi_status rcassi_report_set_psnr(rcassi_report* report, double psnr_db);
rcassi_status rcassi_report_add_correlation(rcassi_report* report, uint32_t x,
                                            uint32_t y, double r);
rcassi_status rcassi_report_add_correlation_error(rcassi_report* report,
                                                  uint32_t x, uint32_t y,
                                                  const char* message);

/* Solve data; these fail with RCASSI_ERROR_INVALID_ARGUMENT until a solver
 * has written into the report. Both traces have length iterations_run. */
rcassi_status rcassi_report_iterations(const rcassi_report* report,
                                       uint32_t* out);
rcassi_status rcassi_report_stop_reason(const rcassi_report* report,
                                        rcassi_stop_reason* out);
rcassi_status rcassi_report_objective_trace(const rcassi_report* report,
                                            double* out);
rcassi_status rcassi_report_residual_trace(const rcassi_report* report,
                                           double* out);

/* JSON serialization; identical reports serialize to identical bytes.
 * rcassi_report_to_json allocates *out_text, released with
 * rcassi_text_destroy. */
rcassi_status rcassi_report_write_json(const rcassi_report* report,
                                       const char* path);
rcassi_status rcassi_report_to_json(const rcassi_report* report,
                                    char** out_text);
void rcassi_text_destroy(char* text);

/* ---- file exports --------------------------------------------------------- */

/* 8-bit binary PGM of one band, min-max normalized. out_was_constant
 * (optional) reports a constant band, exported as all zeros. */
rcassi_status rcassi_export_band_pgm(const rcassi_cube* cube, uint32_t channel,
                                     const char* path, int* out_was_constant);

/* CSV of the spectra at count probe points, header
 * "wavelength_nm,p1,p2,...". */
rcassi_status rcassi_export_spectra_csv(const rcassi_cube* cube,
                                        const uint32_t* xs, const uint32_t* ys,
                                        uint32_t count, const char* path);

#ifdef __cplusplus
}
#endif

#endif /* RCASSI_H */
