#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "core/cube.hpp"
#include "optics/optics.hpp"

namespace rcassi {

enum class StopReason {
  max_iters,
  tolerance,
  diverged,    // non-finite intermediate, last finite iterate returned
  degenerate,  // all-zero mask weights, nothing to project against
};

const char* to_string(StopReason reason);

/// Per-solve record. objective_trace holds one entry per produced iterate
/// (length == iterations_run); residual_trace holds ||meas - H f|| at the
/// same points.
struct SolveReport {
  std::vector<double> objective_trace;
  std::vector<double> residual_trace;
  std::uint32_t iterations_run = 0;
  StopReason stop_reason = StopReason::max_iters;
  double wall_time_s = 0.0;
  std::vector<std::string> warnings;
};

struct TwistConfig {
  std::optional<double> tau;  // unset: 0.01 * max|H^T meas|
  double alpha = 1.9;
  double beta = 1.0;
  std::uint32_t max_iters = 200;
  double rel_obj_tol = 1e-5;
  std::uint32_t tv_inner_iters = 10;
};

struct GapTvConfig {
  std::optional<double> tv_weight;  // unset: 0.01 * max|H^T meas|
  std::uint32_t max_iters = 200;
  std::uint32_t tv_inner_iters = 10;
};

/// 0.5 * ||meas - H f||^2 + tau * sum over bands of TV(band).
double objective(const SystemOperator& op, const Measurement& meas,
                 const SpectralCube& cube, double tau);

/// Default regularization weight: 0.01 * max|H^T meas|.
double default_tv_weight(const SystemOperator& op, const Measurement& meas);

/// Two-step iterative shrinkage/thresholding with a per-band TV prox:
///   f_{t+1} = (1 - alpha) f_{t-1} + (alpha - beta) f_t + beta Gamma(f_t).
/// Gamma runs on the scalar-normalized system (H, meas, tau divided by
/// c^2 = max diag(HH^T), the operator's largest eigenvalue): without that
/// rescaling the recursion is unstable for any multi-channel binary mask at
/// the default alpha/beta. The normalization leaves the objective's minimizer
/// unchanged, and the reported trace uses the original objective. Start is
/// the normalized back-projection adjoint(meas)/c^2; alpha = beta = 1 reduces
/// to plain IST. Stops on max_iters or when the relative objective change
/// falls to rel_obj_tol or below.
std::pair<SpectralCube, SolveReport> twist_solve(const SystemOperator& op,
                                                 const Measurement& meas,
                                                 const TwistConfig& config);

/// Generalized alternating projection with a per-band TV prox:
///   f <- tv_denoise(f + H^T((meas - H f) / diag(HH^T))),
/// skipping detector pixels with zero weight. Runs max_iters iterations; an
/// all-zero mask yields the zero cube with a degenerate-system report.
std::pair<SpectralCube, SolveReport> gaptv_solve(const SystemOperator& op,
                                                 const Measurement& meas,
                                                 const GapTvConfig& config);

}  // namespace rcassi
