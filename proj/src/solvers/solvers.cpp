#include "solvers/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "core/error.hpp"
#include "solvers/tv.hpp"

namespace rcassi {

const char* to_string(StopReason reason) {
  switch (reason) {
    case StopReason::max_iters: return "max_iters";
    case StopReason::tolerance: return "tolerance";
    case StopReason::diverged: return "diverged";
    case StopReason::degenerate: return "degenerate";
  }
  return "unknown";
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void check_dims(const SystemOperator& op, const Measurement& meas) {
  require(meas.nx == op.nx() && meas.ny == op.ny(), ErrorCode::dimension_mismatch,
          "measurement dimensions do not match the operator");
}

// residual = meas - H f; returns ||residual||^2.
double residual_into(const SystemOperator& op, const Measurement& meas,
                     std::span<const double> f, std::span<double> residual) {
  forward_into(op, f, residual);
  double norm2 = 0.0;
  for (std::size_t i = 0; i < residual.size(); ++i) {
    residual[i] = meas.data[i] - residual[i];
    norm2 += residual[i] * residual[i];
  }
  return norm2;
}

double cube_tv(std::span<const double> f, std::uint32_t nx, std::uint32_t ny,
               std::uint32_t nl) {
  const std::size_t plane = static_cast<std::size_t>(nx) * ny;
  double acc = 0.0;
  for (std::uint32_t k = 0; k < nl; ++k) {
    acc += total_variation(f.subspan(k * plane, plane), nx, ny);
  }
  return acc;
}

void denoise_bands(std::vector<double>& f, std::uint32_t nx, std::uint32_t ny,
                   std::uint32_t nl, double weight, std::uint32_t inner_iters) {
  const std::size_t plane = static_cast<std::size_t>(nx) * ny;
  for (std::uint32_t k = 0; k < nl; ++k) {
    std::span<double> band(f.data() + k * plane, plane);
    std::vector<double> denoised = tv_denoise(band, nx, ny, weight, inner_iters);
    std::copy(denoised.begin(), denoised.end(), band.begin());
  }
}

std::pair<SpectralCube, SolveReport> degenerate_result(const SystemOperator& op,
                                                       Clock::time_point start) {
  SolveReport report;
  report.stop_reason = StopReason::degenerate;
  report.warnings.push_back(
      "degenerate system: every mask weight is zero, returning the zero cube");
  report.wall_time_s = seconds_since(start);
  return {SpectralCube::zeros(op.nx(), op.ny(), op.grid()), std::move(report)};
}

}  // namespace

double objective(const SystemOperator& op, const Measurement& meas,
                 const SpectralCube& cube, double tau) {
  check_dims(op, meas);
  require(cube.nx == op.nx() && cube.ny == op.ny() && cube.channels() == op.channels(),
          ErrorCode::dimension_mismatch, "cube dimensions do not match the operator");
  require(std::isfinite(tau) && tau >= 0.0, ErrorCode::invalid_argument,
          "tau must be finite and nonnegative");
  std::vector<double> residual(op.plane_size());
  const double norm2 = residual_into(op, meas, cube.data, residual);
  return 0.5 * norm2 + tau * cube_tv(cube.data, op.nx(), op.ny(), op.channels());
}

double default_tv_weight(const SystemOperator& op, const Measurement& meas) {
  check_dims(op, meas);
  std::vector<double> back(op.cube_size());
  adjoint_into(op, meas.data, back);
  double peak = 0.0;
  for (double v : back) peak = std::max(peak, std::abs(v));
  return 0.01 * peak;
}

std::pair<SpectralCube, SolveReport> twist_solve(const SystemOperator& op,
                                                 const Measurement& meas,
                                                 const TwistConfig& config) {
  const auto start = Clock::now();
  check_dims(op, meas);
  require(config.alpha > 0.0 && config.alpha < 2.0, ErrorCode::invalid_argument,
          "twist alpha must lie in (0, 2)");
  require(config.beta > 0.0 && std::isfinite(config.beta), ErrorCode::invalid_argument,
          "twist beta must be positive");
  require(config.max_iters >= 1, ErrorCode::invalid_argument,
          "twist max_iters must be at least 1");
  require(std::isfinite(config.rel_obj_tol) && config.rel_obj_tol >= 0.0,
          ErrorCode::invalid_argument, "twist rel_obj_tol must be nonnegative");
  if (config.tau) {
    require(std::isfinite(*config.tau) && *config.tau >= 0.0, ErrorCode::invalid_argument,
            "twist tau must be finite and nonnegative");
  }

  const std::vector<double> weights = diag_hht(op);
  const double c2 = *std::max_element(weights.begin(), weights.end());
  if (c2 == 0.0) return degenerate_result(op, start);
  const double inv_c2 = 1.0 / c2;

  const double tau = config.tau ? *config.tau : default_tv_weight(op, meas);
  const double prox_weight = tau * inv_c2;
  const std::uint32_t nx = op.nx(), ny = op.ny(), nl = op.channels();
  const std::size_t n = op.cube_size();

  std::vector<double> f_prev(n), f_cur(n), f_next(n), step(n);
  std::vector<double> residual(op.plane_size());

  // Gamma(f) = prox(f + H^T(meas - H f) / c^2); returns ||meas - H f||^2.
  auto gamma = [&](const std::vector<double>& f, std::vector<double>& out) {
    const double norm2 = residual_into(op, meas, f, residual);
    adjoint_into(op, residual, out);
    for (std::size_t i = 0; i < n; ++i) out[i] = f[i] + inv_c2 * out[i];
    denoise_bands(out, nx, ny, nl, prox_weight, config.tv_inner_iters);
    return norm2;
  };

  adjoint_into(op, meas.data, f_prev);
  for (double& v : f_prev) v *= inv_c2;
  gamma(f_prev, f_cur);

  SolveReport report;
  auto record = [&](const std::vector<double>& f) {
    const double norm2 = residual_into(op, meas, f, residual);
    report.residual_trace.push_back(std::sqrt(norm2));
    report.objective_trace.push_back(0.5 * norm2 + tau * cube_tv(f, nx, ny, nl));
    report.iterations_run = static_cast<std::uint32_t>(report.objective_trace.size());
    return report.objective_trace.back();
  };

  double obj_prev = record(f_cur);
  bool diverged = !std::isfinite(obj_prev);
  if (!diverged) {
    for (std::uint32_t t = 2; t <= config.max_iters; ++t) {
      gamma(f_cur, step);
      for (std::size_t i = 0; i < n; ++i) {
        f_next[i] = (1.0 - config.alpha) * f_prev[i] +
                    (config.alpha - config.beta) * f_cur[i] + config.beta * step[i];
      }
      std::swap(f_prev, f_cur);
      std::swap(f_cur, f_next);
      const double obj = record(f_cur);
      if (!std::isfinite(obj)) {
        diverged = true;
        break;
      }
      if (std::abs(obj - obj_prev) <= config.rel_obj_tol * std::abs(obj_prev)) {
        report.stop_reason = StopReason::tolerance;
        break;
      }
      obj_prev = obj;
    }
  }
  if (diverged) {
    report.stop_reason = StopReason::diverged;
    report.warnings.push_back("non-finite objective, returning the last finite iterate");
    std::swap(f_cur, f_prev);  // previous iterate produced the last finite objective
  }
  report.wall_time_s = seconds_since(start);
  return {SpectralCube(nx, ny, op.grid(), std::move(f_cur)), std::move(report)};
}

std::pair<SpectralCube, SolveReport> gaptv_solve(const SystemOperator& op,
                                                 const Measurement& meas,
                                                 const GapTvConfig& config) {
  const auto start = Clock::now();
  check_dims(op, meas);
  require(config.max_iters >= 1, ErrorCode::invalid_argument,
          "gaptv max_iters must be at least 1");
  if (config.tv_weight) {
    require(std::isfinite(*config.tv_weight) && *config.tv_weight >= 0.0,
            ErrorCode::invalid_argument, "gaptv tv_weight must be finite and nonnegative");
  }

  const std::vector<double> weights = diag_hht(op);
  if (*std::max_element(weights.begin(), weights.end()) == 0.0) {
    return degenerate_result(op, start);
  }

  const double tv_weight =
      config.tv_weight ? *config.tv_weight : default_tv_weight(op, meas);
  const std::uint32_t nx = op.nx(), ny = op.ny(), nl = op.channels();
  const std::size_t n = op.cube_size(), m = op.plane_size();

  std::vector<double> f(n), correction(n), scaled(m), hf(m);
  adjoint_into(op, meas.data, f);
  forward_into(op, f, hf);

  SolveReport report;
  bool diverged = false;
  for (std::uint32_t t = 1; t <= config.max_iters; ++t) {
    for (std::size_t i = 0; i < m; ++i) {
      scaled[i] = weights[i] > 0.0 ? (meas.data[i] - hf[i]) / weights[i] : 0.0;
    }
    adjoint_into(op, scaled, correction);
    for (std::size_t i = 0; i < n; ++i) f[i] += correction[i];
    denoise_bands(f, nx, ny, nl, tv_weight, config.tv_inner_iters);

    double norm2 = 0.0;
    forward_into(op, f, hf);
    for (std::size_t i = 0; i < m; ++i) {
      const double r = meas.data[i] - hf[i];
      norm2 += r * r;
    }
    report.residual_trace.push_back(std::sqrt(norm2));
    report.objective_trace.push_back(0.5 * norm2 + tv_weight * cube_tv(f, nx, ny, nl));
    report.iterations_run = t;
    if (!std::isfinite(report.objective_trace.back())) {
      diverged = true;
      break;
    }
  }
  if (diverged) {
    report.stop_reason = StopReason::diverged;
    report.warnings.push_back("non-finite objective, stopping early");
    for (double& v : f) {
      if (!std::isfinite(v)) v = 0.0;  // keep the returned cube constructible
    }
  }
  report.wall_time_s = seconds_since(start);
  return {SpectralCube(nx, ny, op.grid(), std::move(f)), std::move(report)};
}

}  // namespace rcassi
