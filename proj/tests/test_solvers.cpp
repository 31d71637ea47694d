#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "core/error.hpp"
#include "core/random.hpp"
#include "optics/optics.hpp"
#include "phantoms/phantoms.hpp"
#include "solvers/solvers.hpp"
#include "solvers/tv.hpp"
#include "test_util.hpp"

using rcassi::ErrorCode;
using testutil::code_of;

namespace {

std::vector<double> random_values(std::mt19937_64& rng, std::size_t n) {
  std::vector<double> values(n);
  for (double& v : values) v = rcassi::uniform53(rng);
  return values;
}

// Re-derivation of the dual-projection denoiser with array-at-a-time passes
// instead of fused pixel loops. Same update equations, independent indexing.
std::vector<double> reference_denoise(const std::vector<double>& g, std::uint32_t nx,
                                      std::uint32_t ny, double weight,
                                      std::uint32_t iters) {
  const std::size_t n = g.size();
  if (weight == 0.0 || iters == 0) return g;
  const double tau = 0.25;
  std::vector<double> p1(n, 0.0), p2(n, 0.0);
  std::vector<double> div(n), work(n), gx(n), gy(n);
  const auto idx = [nx](std::uint32_t x, std::uint32_t y) {
    return static_cast<std::size_t>(y) * nx + x;
  };

  const auto compute_div = [&] {
    for (std::uint32_t y = 0; y < ny; ++y) {
      for (std::uint32_t x = 0; x < nx; ++x) {
        double d = 0.0;
        if (x == 0) {
          d += p1[idx(x, y)];
        } else if (x == nx - 1) {
          d -= p1[idx(x - 1, y)];
        } else {
          d += p1[idx(x, y)] - p1[idx(x - 1, y)];
        }
        if (y == 0) {
          d += p2[idx(x, y)];
        } else if (y == ny - 1) {
          d -= p2[idx(x, y - 1)];
        } else {
          d += p2[idx(x, y)] - p2[idx(x, y - 1)];
        }
        div[idx(x, y)] = d;
      }
    }
  };

  for (std::uint32_t iter = 0; iter < iters; ++iter) {
    compute_div();
    for (std::size_t i = 0; i < n; ++i) work[i] = div[i] - g[i] / weight;
    for (std::uint32_t y = 0; y < ny; ++y) {
      for (std::uint32_t x = 0; x < nx; ++x) {
        gx[idx(x, y)] = (x + 1 < nx) ? work[idx(x + 1, y)] - work[idx(x, y)] : 0.0;
        gy[idx(x, y)] = (y + 1 < ny) ? work[idx(x, y + 1)] - work[idx(x, y)] : 0.0;
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double denom = 1.0 + tau * std::sqrt(gx[i] * gx[i] + gy[i] * gy[i]);
      p1[i] = (p1[i] + tau * gx[i]) / denom;
      p2[i] = (p2[i] + tau * gy[i]) / denom;
    }
  }

  compute_div();
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = g[i] - weight * div[i];
  return u;
}

// Matches the hand fixture in the operator tests: mask 1,0,1 over extended
// indices -1..1, scene bands [2,3] and [5,7].
rcassi::SystemOperator hand_operator() {
  return rcassi::SystemOperator(2, 1, rcassi::WavelengthGrid({800.0, 900.0}),
                                rcassi::CodedAperture(3, 1, -1, {1, 0, 1}));
}

// nl = 1 all-ones mask: H is the identity map.
rcassi::SystemOperator identity_operator(std::uint32_t nx, std::uint32_t ny) {
  return rcassi::SystemOperator(nx, ny, rcassi::WavelengthGrid({1000.0}),
                                rcassi::CodedAperture(
                                    nx, ny, 0,
                                    std::vector<std::uint8_t>(
                                        static_cast<std::size_t>(nx) * ny, 1)));
}

double relative_error(const std::vector<double>& got, const std::vector<double>& want) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < got.size(); ++i) {
    num += (got[i] - want[i]) * (got[i] - want[i]);
    den += want[i] * want[i];
  }
  return std::sqrt(num / den);
}

}  // namespace

TEST_CASE("total_variation matches hand-computed values") {
  // Forward differences, zero gradient at the far edges.
  CHECK(rcassi::total_variation(std::vector<double>{0, 1, 0, 1}, 2, 2) == 2.0);
  CHECK(rcassi::total_variation(std::vector<double>{0, 0, 1, 1}, 2, 2) == 2.0);
  const double expected = std::sqrt(5.0) + 3.0;
  CHECK(rcassi::total_variation(std::vector<double>{0, 1, 2, 3}, 2, 2) ==
        doctest::Approx(expected).epsilon(1e-15));
  CHECK(rcassi::total_variation(std::vector<double>{4, 4, 4, 4}, 2, 2) == 0.0);
  CHECK(rcassi::total_variation(std::vector<double>{1, 3, 6}, 3, 1) == 5.0);
  CHECK(rcassi::total_variation(std::vector<double>{2}, 1, 1) == 0.0);
}

TEST_CASE("tv_denoise trivial cases copy the input") {
  const std::vector<double> g{3.0, -1.0, 2.0, 0.5};
  CHECK(rcassi::tv_denoise(g, 2, 2, 0.0, 10) == g);
  CHECK(rcassi::tv_denoise(g, 2, 2, 0.7, 0) == g);
  const std::vector<double> flat(9, 1.25);
  CHECK(rcassi::tv_denoise(flat, 3, 3, 0.5, 25) == flat);
}

TEST_CASE("tv_denoise validates arguments") {
  CHECK(code_of([] { rcassi::tv_denoise(std::vector<double>{1.0}, 2, 2, 0.1, 5); }) ==
        ErrorCode::dimension_mismatch);
  CHECK(code_of([] {
          rcassi::tv_denoise(std::vector<double>{1.0}, 1, 1, -0.1, 5);
        }) == ErrorCode::invalid_argument);
}

TEST_CASE("tv_denoise agrees with an independent re-derivation") {
  std::mt19937_64 rng(31);
  for (const auto [nx, ny] : {std::pair<std::uint32_t, std::uint32_t>{4, 3},
                              {1, 6},
                              {7, 1},
                              {8, 8}}) {
    const auto g = random_values(rng, static_cast<std::size_t>(nx) * ny);
    for (const double weight : {0.05, 0.5, 3.0}) {
      const auto got = rcassi::tv_denoise(g, nx, ny, weight, 12);
      const auto want = reference_denoise(g, nx, ny, weight, 12);
      for (std::size_t i = 0; i < g.size(); ++i) {
        REQUIRE(got[i] == doctest::Approx(want[i]).epsilon(1e-14));
      }
    }
  }
}

TEST_CASE("tv_denoise preserves the image mean") {
  std::mt19937_64 rng(77);
  const std::uint32_t nx = 6, ny = 5;
  const auto g = random_values(rng, nx * ny);
  const auto u = rcassi::tv_denoise(g, nx, ny, 0.8, 30);
  double mg = 0.0, mu = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    mg += g[i];
    mu += u[i];
  }
  CHECK(mu == doctest::Approx(mg).epsilon(1e-12));
}

TEST_CASE("tv_denoise is nonexpansive and reduces noise roughness") {
  std::mt19937_64 rng(99);
  const std::uint32_t nx = 8, ny = 8;
  const auto u = random_values(rng, nx * ny);
  const auto v = random_values(rng, nx * ny);
  const auto du = rcassi::tv_denoise(u, nx, ny, 0.3, 10);
  const auto dv = rcassi::tv_denoise(v, nx, ny, 0.3, 10);
  double before = 0.0, after = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    before += (u[i] - v[i]) * (u[i] - v[i]);
    after += (du[i] - dv[i]) * (du[i] - dv[i]);
  }
  CHECK(std::sqrt(after) <= std::sqrt(before) + 1e-8);

  CHECK(rcassi::total_variation(rcassi::tv_denoise(u, nx, ny, 0.5, 50), nx, ny) <
        rcassi::total_variation(u, nx, ny));
}

TEST_CASE("objective and default weight match hand values") {
  const auto op = hand_operator();
  const rcassi::Measurement meas(2, 1, {5.0, 3.0});
  const rcassi::SpectralCube truth(2, 1, op.grid(), {2.0, 3.0, 5.0, 7.0});

  // Zero residual at the true scene; bands contribute TV 1 and 2.
  CHECK(rcassi::objective(op, meas, truth, 0.5) ==
        doctest::Approx(1.5).epsilon(1e-15));
  const auto zero = rcassi::SpectralCube::zeros(2, 1, op.grid());
  CHECK(rcassi::objective(op, meas, zero, 0.25) ==
        doctest::Approx(0.5 * 34.0).epsilon(1e-15));

  // Back-projection of [5,3] peaks at 5, so the heuristic weight is 0.05.
  CHECK(rcassi::default_tv_weight(op, meas) == doctest::Approx(0.05).epsilon(1e-15));

  CHECK(code_of([&] { rcassi::objective(op, meas, truth, -1.0); }) ==
        ErrorCode::invalid_argument);
}

TEST_CASE("twist validates its configuration") {
  const auto op = identity_operator(3, 3);
  const rcassi::Measurement meas = rcassi::Measurement::zeros(3, 3);
  rcassi::TwistConfig config;

  config.alpha = 2.0;
  CHECK(code_of([&] { rcassi::twist_solve(op, meas, config); }) ==
        ErrorCode::invalid_argument);
  config = {};
  config.beta = 0.0;
  CHECK(code_of([&] { rcassi::twist_solve(op, meas, config); }) ==
        ErrorCode::invalid_argument);
  config = {};
  config.max_iters = 0;
  CHECK(code_of([&] { rcassi::twist_solve(op, meas, config); }) ==
        ErrorCode::invalid_argument);
  config = {};
  config.rel_obj_tol = -1e-3;
  CHECK(code_of([&] { rcassi::twist_solve(op, meas, config); }) ==
        ErrorCode::invalid_argument);
  config = {};
  config.tau = -0.5;
  CHECK(code_of([&] { rcassi::twist_solve(op, meas, config); }) ==
        ErrorCode::invalid_argument);

  CHECK(code_of([&] {
          rcassi::twist_solve(op, rcassi::Measurement::zeros(2, 2), {});
        }) == ErrorCode::dimension_mismatch);
  CHECK(code_of([&] {
          rcassi::gaptv_solve(op, rcassi::Measurement::zeros(2, 2), {});
        }) == ErrorCode::dimension_mismatch);
}

TEST_CASE("both solvers recover the scene through an identity system") {
  std::mt19937_64 rng(5);
  const std::uint32_t nx = 4, ny = 4;
  const auto op = identity_operator(nx, ny);
  const auto truth = random_values(rng, op.cube_size());
  const rcassi::SpectralCube cube(nx, ny, op.grid(), truth);
  const auto meas = rcassi::forward(op, cube);

  rcassi::TwistConfig twist_config;
  twist_config.tau = 0.0;
  twist_config.max_iters = 50;
  const auto [trec, treport] = rcassi::twist_solve(op, meas, twist_config);
  CHECK(relative_error(trec.data, truth) <= 1e-6);
  CHECK(treport.stop_reason == rcassi::StopReason::tolerance);

  rcassi::GapTvConfig gap_config;
  gap_config.tv_weight = 0.0;
  gap_config.max_iters = 5;
  const auto [grec, greport] = rcassi::gaptv_solve(op, meas, gap_config);
  CHECK(relative_error(grec.data, truth) <= 1e-6);
  CHECK(greport.stop_reason == rcassi::StopReason::max_iters);
  CHECK(greport.iterations_run == 5);
}

TEST_CASE("alpha = beta = 1 degenerates twist to plain iterated denoising steps") {
  std::mt19937_64 rng(17);
  const std::uint32_t nx = 5, ny = 4, nl = 3;
  const auto mask = rcassi::random_mask(nx, ny, nl, 0.5, 404);
  const rcassi::SystemOperator op(nx, ny,
                                  rcassi::make_wavelength_grid(700.0, 1600.0, nl), mask);
  const auto scene = random_values(rng, op.cube_size());
  std::vector<double> meas_data(op.plane_size());
  rcassi::forward_into(op, scene, meas_data);
  const rcassi::Measurement meas(nx, ny, meas_data);

  const double tau = 0.02;
  rcassi::TwistConfig config;
  config.tau = tau;
  config.alpha = 1.0;
  config.beta = 1.0;
  config.max_iters = 3;
  config.rel_obj_tol = 0.0;
  const auto [cube, report] = rcassi::twist_solve(op, meas, config);
  REQUIRE(report.iterations_run == 3);

  const auto weights = rcassi::diag_hht(op);
  const double c2 = *std::max_element(weights.begin(), weights.end());
  const double inv_c2 = 1.0 / c2;
  const std::size_t plane = op.plane_size();

  const auto gamma = [&](const std::vector<double>& f) {
    std::vector<double> residual(plane);
    rcassi::forward_into(op, f, residual);
    for (std::size_t i = 0; i < plane; ++i) residual[i] = meas.data[i] - residual[i];
    std::vector<double> out(f.size());
    rcassi::adjoint_into(op, residual, out);
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i] + inv_c2 * out[i];
    for (std::uint32_t k = 0; k < nl; ++k) {
      std::span<double> band(out.data() + k * plane, plane);
      const auto denoised =
          rcassi::tv_denoise(band, nx, ny, tau * inv_c2, config.tv_inner_iters);
      std::copy(denoised.begin(), denoised.end(), band.begin());
    }
    return out;
  };

  std::vector<double> f(op.cube_size());
  rcassi::adjoint_into(op, meas.data, f);
  for (double& v : f) v *= inv_c2;
  f = gamma(gamma(gamma(f)));

  for (std::size_t i = 0; i < f.size(); ++i) {
    REQUIRE(cube.data[i] == doctest::Approx(f[i]).epsilon(1e-13));
  }
}

TEST_CASE("twist stops on relative objective change") {
  std::mt19937_64 rng(23);
  const auto mask = rcassi::random_mask(6, 6, 2, 0.5, 7);
  const rcassi::SystemOperator op(6, 6, rcassi::make_wavelength_grid(700.0, 1600.0, 2),
                                  mask);
  const auto scene = random_values(rng, op.cube_size());
  std::vector<double> meas_data(op.plane_size());
  rcassi::forward_into(op, scene, meas_data);
  const rcassi::Measurement meas(6, 6, meas_data);

  rcassi::TwistConfig config;
  config.rel_obj_tol = 1e10;  // any pair of iterates satisfies this
  config.max_iters = 50;
  const auto [cube, report] = rcassi::twist_solve(op, meas, config);
  CHECK(report.stop_reason == rcassi::StopReason::tolerance);
  CHECK(report.iterations_run == 2);

  config.rel_obj_tol = 0.0;
  config.max_iters = 7;
  const auto [cube2, report2] = rcassi::twist_solve(op, meas, config);
  CHECK(report2.stop_reason == rcassi::StopReason::max_iters);
  CHECK(report2.iterations_run == 7);
  CHECK(report2.objective_trace.size() == 7);
  CHECK(report2.residual_trace.size() == 7);
  CHECK(report2.wall_time_s >= 0.0);
  for (std::size_t i = 0; i < 7; ++i) {
    CHECK(std::isfinite(report2.objective_trace[i]));
    CHECK(report2.residual_trace[i] >= 0.0);
  }
}

TEST_CASE("an unstable twist configuration reports divergence with a finite cube") {
  std::mt19937_64 rng(29);
  const auto mask = rcassi::random_mask(8, 8, 4, 0.8, 11);
  const rcassi::SystemOperator op(8, 8, rcassi::make_wavelength_grid(700.0, 1600.0, 4),
                                  mask);
  const auto scene = random_values(rng, op.cube_size());
  std::vector<double> meas_data(op.plane_size());
  rcassi::forward_into(op, scene, meas_data);
  const rcassi::Measurement meas(8, 8, meas_data);

  rcassi::TwistConfig config;
  config.beta = 64.0;  // violates the two-step stability bound
  config.max_iters = 400;
  config.rel_obj_tol = 0.0;
  const auto [cube, report] = rcassi::twist_solve(op, meas, config);
  CHECK(report.stop_reason == rcassi::StopReason::diverged);
  CHECK_FALSE(report.warnings.empty());
  CHECK(report.iterations_run < 400);
  for (double v : cube.data) REQUIRE(std::isfinite(v));
}

TEST_CASE("an all-blocked mask produces a degenerate zero solve") {
  const std::uint32_t nx = 4, ny = 3, nl = 2;
  const auto mask = rcassi::random_mask(nx, ny, nl, 0.0, 1);
  const rcassi::SystemOperator op(nx, ny,
                                  rcassi::make_wavelength_grid(700.0, 1600.0, nl), mask);
  const rcassi::Measurement meas(nx, ny, std::vector<double>(nx * ny, 1.0));

  for (const bool use_twist : {true, false}) {
    const auto [cube, report] = use_twist
                                    ? rcassi::twist_solve(op, meas, {})
                                    : rcassi::gaptv_solve(op, meas, {});
    CHECK(report.stop_reason == rcassi::StopReason::degenerate);
    CHECK_FALSE(report.warnings.empty());
    CHECK(report.iterations_run == 0);
    CHECK(cube.data == std::vector<double>(op.cube_size(), 0.0));
  }
}

TEST_CASE("gap-tv descends on a noiseless compressive instance") {
  std::mt19937_64 rng(37);
  const std::uint32_t nx = 8, ny = 8, nl = 3;
  const auto mask = rcassi::random_mask(nx, ny, nl, 0.5, 13);
  const rcassi::SystemOperator op(nx, ny,
                                  rcassi::make_wavelength_grid(700.0, 1600.0, nl), mask);
  const auto scene = random_values(rng, op.cube_size());
  std::vector<double> meas_data(op.plane_size());
  rcassi::forward_into(op, scene, meas_data);
  const rcassi::Measurement meas(nx, ny, meas_data);

  rcassi::GapTvConfig config;
  config.max_iters = 30;
  const auto [cube, report] = rcassi::gaptv_solve(op, meas, config);
  REQUIRE(report.residual_trace.size() == 30);
  CHECK(report.residual_trace.back() < report.residual_trace.front());
  for (double v : report.objective_trace) CHECK(std::isfinite(v));
  CHECK(report.stop_reason == rcassi::StopReason::max_iters);

  CHECK(code_of([&] {
          rcassi::GapTvConfig bad;
          bad.max_iters = 0;
          rcassi::gaptv_solve(op, meas, bad);
        }) == ErrorCode::invalid_argument);
  CHECK(code_of([&] {
          rcassi::GapTvConfig bad;
          bad.tv_weight = -2.0;
          rcassi::gaptv_solve(op, meas, bad);
        }) == ErrorCode::invalid_argument);
}

TEST_CASE("stop reasons have stable names") {
  CHECK(std::string(rcassi::to_string(rcassi::StopReason::max_iters)) == "max_iters");
  CHECK(std::string(rcassi::to_string(rcassi::StopReason::tolerance)) == "tolerance");
  CHECK(std::string(rcassi::to_string(rcassi::StopReason::diverged)) == "diverged");
  CHECK(std::string(rcassi::to_string(rcassi::StopReason::degenerate)) == "degenerate");
}
