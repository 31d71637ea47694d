// End-to-end acceptance checks. Each criterion prints one [PASS]/[FAIL]
// line; the process exits 0 only when every criterion passes. argv[1] must
// name the CLI binary (the pipeline criteria drive it through a shell).

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "core/cube.hpp"
#include "core/grid.hpp"
#include "core/random.hpp"
#include "io/io.hpp"
#include "metrics/metrics.hpp"
#include "optics/optics.hpp"
#include "phantoms/phantoms.hpp"
#include "solvers/solvers.hpp"

namespace {

namespace fs = std::filesystem;

std::string g_cli;
fs::path g_work;

struct Outcome {
  bool ok = true;
  std::string detail;
};

Outcome fail(std::string detail) { return {false, std::move(detail)}; }

bool run_criterion(const std::string& name, double budget_s,
                   const std::function<Outcome()>& fn) {
  const auto start = std::chrono::steady_clock::now();
  Outcome outcome;
  try {
    outcome = fn();
  } catch (const std::exception& e) {
    outcome = fail(std::string("exception: ") + e.what());
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  if (outcome.ok && elapsed > budget_s) {
    outcome = fail("exceeded time budget");
  }
  std::printf("[%s] %s (%.2f s)%s%s\n", outcome.ok ? "PASS" : "FAIL",
              name.c_str(), elapsed, outcome.detail.empty() ? "" : " - ",
              outcome.detail.c_str());
  std::fflush(stdout);
  return outcome.ok;
}

int run_cli(const std::string& args) {
  const std::string log = (g_work / "cli_log.txt").string();
  const std::string command = g_cli + " " + args + " >" + log + " 2>&1";
  const int raw = std::system(command.c_str());
  return raw == -1 ? -1 : (raw >> 8) & 0xFF;
}

std::vector<double> random_values(std::mt19937_64& rng, std::size_t n) {
  std::vector<double> values(n);
  for (double& v : values) v = rcassi::uniform53(rng);
  return values;
}

rcassi::SystemOperator random_system(std::uint32_t nx, std::uint32_t ny,
                                     std::uint32_t nl, double density,
                                     std::uint64_t seed) {
  const rcassi::WavelengthGrid grid =
      nl == 1 ? rcassi::WavelengthGrid({1000.0})
              : rcassi::make_wavelength_grid(700.0, 1600.0, nl);
  return rcassi::SystemOperator(nx, ny, grid,
                                rcassi::random_mask(nx, ny, nl, density, seed));
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

// ---- operator criteria ----------------------------------------------------

Outcome adjoint_identity() {
  std::mt19937_64 rng(1001);
  const double densities[3] = {0.3, 0.5, 0.8};
  for (int trial = 0; trial < 100; ++trial) {
    const std::uint32_t nx = 1 + static_cast<std::uint32_t>(rng() % 16);
    const std::uint32_t ny = 1 + static_cast<std::uint32_t>(rng() % 16);
    const std::uint32_t nl = 1 + static_cast<std::uint32_t>(rng() % 8);
    const auto op = random_system(nx, ny, nl, densities[trial % 3], rng());

    const rcassi::SpectralCube f(nx, ny, op.grid(),
                                 random_values(rng, op.cube_size()));
    const rcassi::Measurement g(nx, ny, random_values(rng, op.plane_size()));

    const auto hf = rcassi::forward(op, f);
    const auto htg = rcassi::adjoint(op, g);
    const double lhs = dot(hf.data, g.data);
    const double rhs = dot(f.data, htg.data);
    const double bound =
        std::max(1e-10 * norm(hf.data) * norm(g.data), 1e-30);
    if (std::abs(lhs - rhs) > bound) {
      return fail("trial " + std::to_string(trial) + ": |" +
                  std::to_string(lhs) + " - " + std::to_string(rhs) +
                  "| exceeds " + std::to_string(bound));
    }
  }
  return {};
}

Outcome dense_oracle() {
  std::mt19937_64 rng(2002);
  for (std::uint32_t nx = 1; nx <= 6; ++nx) {
    for (std::uint32_t ny = 1; ny <= 5; ++ny) {
      for (std::uint32_t nl = 1; nl <= 4; ++nl) {
        const auto op = random_system(nx, ny, nl, 0.5, rng());
        const auto matrix = rcassi::build_explicit_matrix(op);
        const std::size_t rows = op.plane_size();
        const std::size_t cols = op.cube_size();

        const rcassi::SpectralCube f(nx, ny, op.grid(), random_values(rng, cols));
        const auto hf = rcassi::forward(op, f);
        for (std::size_t r = 0; r < rows; ++r) {
          double expected = 0.0;
          for (std::size_t c = 0; c < cols; ++c) {
            expected += matrix[r * cols + c] * f.data[c];
          }
          if (std::abs(hf.data[r] - expected) > 1e-12) {
            return fail("forward mismatch at " + std::to_string(nx) + "x" +
                        std::to_string(ny) + "x" + std::to_string(nl));
          }
        }

        const rcassi::Measurement g(nx, ny, random_values(rng, rows));
        const auto htg = rcassi::adjoint(op, g);
        for (std::size_t c = 0; c < cols; ++c) {
          double expected = 0.0;
          for (std::size_t r = 0; r < rows; ++r) {
            expected += matrix[r * cols + c] * g.data[r];
          }
          if (std::abs(htg.data[c] - expected) > 1e-12) {
            return fail("adjoint mismatch at " + std::to_string(nx) + "x" +
                        std::to_string(ny) + "x" + std::to_string(nl));
          }
        }
      }
    }
  }
  return {};
}

// ---- solver criteria --------------------------------------------------------

double relative_error(const std::vector<double>& got,
                      const std::vector<double>& want) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < got.size(); ++i) {
    num += (got[i] - want[i]) * (got[i] - want[i]);
    den += want[i] * want[i];
  }
  return std::sqrt(num / den);
}

Outcome identity_recovery() {
  std::mt19937_64 rng(3003);
  const std::uint32_t nx = 16, ny = 16;
  const rcassi::SystemOperator op(
      nx, ny, rcassi::WavelengthGrid({1000.0}),
      rcassi::CodedAperture(nx, ny, 0,
                            std::vector<std::uint8_t>(nx * ny, 1)));
  const rcassi::SpectralCube truth(nx, ny, op.grid(),
                                   random_values(rng, op.cube_size()));
  const auto meas = rcassi::forward(op, truth);

  rcassi::TwistConfig twist;
  twist.tau = 0.0;
  twist.max_iters = 100;
  const auto [twist_cube, twist_report] = rcassi::twist_solve(op, meas, twist);
  const double twist_err = relative_error(twist_cube.data, truth.data);
  if (twist_err > 1e-6) {
    return fail("twist relative error " + std::to_string(twist_err));
  }

  rcassi::GapTvConfig gap;
  gap.tv_weight = 0.0;
  gap.max_iters = 20;
  const auto [gap_cube, gap_report] = rcassi::gaptv_solve(op, meas, gap);
  const double gap_err = relative_error(gap_cube.data, truth.data);
  if (gap_err > 1e-6) {
    return fail("gap-tv relative error " + std::to_string(gap_err));
  }
  return {};
}

Outcome letter_recovery() {
  const std::uint32_t nx = 64, ny = 64, nl = 8;
  const auto grid = rcassi::make_wavelength_grid(700.0, 1600.0, nl);
  const std::vector<rcassi::GlyphSpec> glyphs{
      {'U', grid.wavelengths[2], 100.0},
      {'P', grid.wavelengths[5], 100.0},
  };
  const auto truth = rcassi::letter_target(glyphs, nx, ny, grid);
  const rcassi::SystemOperator op(nx, ny, grid,
                                  rcassi::random_mask(nx, ny, nl, 0.5, 4242));
  const auto meas = rcassi::forward(op, truth);

  rcassi::TwistConfig config;
  config.max_iters = 300;
  config.rel_obj_tol = 0.0;
  const auto [recon, report] = rcassi::twist_solve(op, meas, config);

  auto clamped = recon;
  for (double& v : clamped.data) v = std::max(v, 0.0);
  const double db = rcassi::psnr(clamped, truth);
  if (!(db >= 25.0)) {
    return fail("psnr " + std::to_string(db) + " dB after " +
                std::to_string(report.iterations_run) + " iterations");
  }

  // Per-pixel spectral argmax over the glyph support.
  std::size_t correct = 0, total = 0;
  for (std::uint32_t y = 0; y < ny; ++y) {
    for (std::uint32_t x = 0; x < nx; ++x) {
      std::uint32_t truth_peak = 0;
      bool lit = false;
      for (std::uint32_t k = 0; k < nl; ++k) {
        if (truth.at(x, y, k) > truth.at(x, y, truth_peak)) truth_peak = k;
        lit |= truth.at(x, y, k) > 0.0;
      }
      if (!lit) continue;
      ++total;
      std::uint32_t recon_peak = 0;
      for (std::uint32_t k = 1; k < nl; ++k) {
        if (clamped.at(x, y, k) > clamped.at(x, y, recon_peak)) recon_peak = k;
      }
      if (recon_peak == truth_peak) ++correct;
    }
  }
  const double fraction =
      total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total);
  if (!(fraction >= 0.95)) {
    return fail("argmax correct for " + std::to_string(100.0 * fraction) +
                "% of glyph pixels");
  }
  return {};
}

Outcome material_discrimination() {
  const std::uint32_t nx = 128, ny = 128;
  const auto full = rcassi::make_wavelength_grid(700.0, 1600.0, 52);
  const auto split = rcassi::split_bands(full, 1050.0);
  if (split.low_count != 20 || split.high_count != 32) {
    return fail("unexpected sub-band split");
  }
  std::vector<double> low(full.wavelengths.begin(),
                          full.wavelengths.begin() + split.low_count);
  const rcassi::WavelengthGrid grid(low);

  const auto real = rcassi::real_apple_spectrum(grid);
  const auto fake = rcassi::fake_apple_spectrum(grid);
  const auto truth = rcassi::material_scene(nx, ny, grid, real, fake);

  const rcassi::SystemOperator op(
      nx, ny, grid, rcassi::random_mask(nx, ny, grid.channels(), 0.5, 777));
  const auto clean = rcassi::forward(op, truth);
  const auto meas = rcassi::add_noise(clean, 0.01, 778);

  rcassi::TwistConfig config;
  config.max_iters = 300;
  config.rel_obj_tol = 1e-6;
  const auto [recon, report] = rcassi::twist_solve(op, meas, config);

  const double r_real = rcassi::spectral_correlation(recon, truth, 32, 64);
  const double r_fake = rcassi::spectral_correlation(recon, truth, 96, 64);
  if (!(r_real >= 0.93 && r_fake >= 0.93)) {
    return fail("correlations " + std::to_string(r_real) + " / " +
                std::to_string(r_fake) + " after " +
                std::to_string(report.iterations_run) + " iterations");
  }
  return {};
}

Outcome subband_stitch() {
  const std::uint32_t nx = 32, ny = 32;
  const auto full = rcassi::make_wavelength_grid(700.0, 1600.0, 52);
  const auto real = rcassi::real_apple_spectrum(full);
  const auto fake = rcassi::fake_apple_spectrum(full);
  const auto scene = rcassi::material_scene(nx, ny, full, real, fake);

  const auto split = rcassi::split_bands(full, 1050.0);
  const auto low_truth = rcassi::slice_bands(scene, 0, split.low_count);
  const auto high_truth =
      rcassi::slice_bands(scene, split.low_count, split.high_count);

  const auto reconstruct_half = [&](const rcassi::SpectralCube& half,
                                    std::uint64_t seed) {
    const rcassi::SystemOperator op(
        nx, ny, half.grid,
        rcassi::random_mask(nx, ny, half.channels(), 0.5, seed));
    const auto meas = rcassi::forward(op, half);
    rcassi::TwistConfig config;
    config.max_iters = 40;
    const auto [cube, report] = rcassi::twist_solve(op, meas, config);
    return cube;
  };

  const auto low_recon = reconstruct_half(low_truth, 91);
  const auto high_recon = reconstruct_half(high_truth, 92);
  const auto stitched = rcassi::stitch_cubes(low_recon, high_recon);

  if (stitched.grid.wavelengths != full.wavelengths) {
    return fail("stitched grid differs from the 52-channel reference");
  }
  const double spacing = full.wavelengths[1] - full.wavelengths[0];
  if (std::abs(spacing - 900.0 / 51.0) > 1e-9) {
    return fail("grid spacing " + std::to_string(spacing));
  }
  return {};
}

// ---- pipeline criteria -------------------------------------------------------

Outcome solver_comparison() {
  const fs::path dir = g_work / "compare";
  fs::create_directories(dir);
  const auto p = [&](const char* name) { return (dir / name).string(); };

  const std::string sequence[] = {
      "phantom --kind letters --nx 32 --ny 32 --grid 700:1600:4 "
      "--glyph U@1000:150 --out " + p("scene.hsc"),
      "mask --nx 32 --ny 32 --nlam 4 --seed 5 --out " + p("mask.msk"),
      "simulate --scene " + p("scene.hsc") + " --mask " + p("mask.msk") +
          " --out " + p("meas.hsc"),
      "reconstruct --meas " + p("meas.hsc") + " --mask " + p("mask.msk") +
          " --grid 700:1600:4 --algo twist --iters 60 --out " +
          p("recon_twist.hsc") + " --report " + p("report_twist.json"),
      "reconstruct --meas " + p("meas.hsc") + " --mask " + p("mask.msk") +
          " --grid 700:1600:4 --algo gaptv --iters 60 --out " +
          p("recon_gaptv.hsc") + " --report " + p("report_gaptv.json"),
      "evaluate --recon " + p("recon_twist.hsc") + " --truth " + p("scene.hsc") +
          " --points 16,16 --out " + p("eval_twist.json"),
      "evaluate --recon " + p("recon_gaptv.hsc") + " --truth " + p("scene.hsc") +
          " --points 16,16 --out " + p("eval_gaptv.json"),
  };
  for (const auto& args : sequence) {
    if (run_cli(args) != 0) return fail("command failed: " + args);
  }

  for (const char* algo : {"twist", "gaptv"}) {
    std::ifstream in(dir / (std::string("report_") + algo + ".json"));
    const auto report = nlohmann::json::parse(in);
    if (report["config"]["algorithm"] != algo) {
      return fail(std::string(algo) + " report names the wrong algorithm");
    }
    if (!report["objective_trace"].is_array() ||
        report["objective_trace"].empty()) {
      return fail(std::string(algo) + " report lacks an objective trace");
    }
    std::ifstream eval_in(dir / (std::string("eval_") + algo + ".json"));
    const auto eval = nlohmann::json::parse(eval_in);
    if (!eval["metrics"]["psnr_db"].is_number()) {
      return fail(std::string(algo) + " evaluation lacks a psnr value");
    }
  }
  return {};
}

Outcome determinism() {
  const auto pipeline = [&](const fs::path& dir) {
    fs::create_directories(dir);
    const auto p = [&](const char* name) { return (dir / name).string(); };
    const std::string sequence[] = {
        "phantom --kind materials --nx 24 --ny 24 --grid 700:1600:6 --out " +
            p("scene.hsc"),
        "mask --nx 24 --ny 24 --nlam 6 --seed 42 --out " + p("mask.msk"),
        "simulate --scene " + p("scene.hsc") + " --mask " + p("mask.msk") +
            " --noise-sigma 0.01 --seed 9 --out " + p("meas.hsc"),
        "reconstruct --meas " + p("meas.hsc") + " --mask " + p("mask.msk") +
            " --grid 700:1600:6 --algo twist --iters 40 --out " +
            p("recon.hsc") + " --report " + p("report.json"),
    };
    for (const auto& args : sequence) {
      if (run_cli(args) != 0) return false;
    }
    return true;
  };

  const fs::path run1 = g_work / "run1";
  const fs::path run2 = g_work / "run2";
  if (!pipeline(run1) || !pipeline(run2)) return fail("pipeline command failed");

  for (const char* name : {"scene.hsc", "mask.msk", "meas.hsc", "recon.hsc"}) {
    std::ifstream a(run1 / name, std::ios::binary);
    std::ifstream b(run2 / name, std::ios::binary);
    const std::string bytes_a((std::istreambuf_iterator<char>(a)),
                              std::istreambuf_iterator<char>());
    const std::string bytes_b((std::istreambuf_iterator<char>(b)),
                              std::istreambuf_iterator<char>());
    if (bytes_a.empty() || bytes_a != bytes_b) {
      return fail(std::string(name) + " differs between runs");
    }
  }

  std::ifstream ra(run1 / "report.json"), rb(run2 / "report.json");
  auto ja = nlohmann::json::parse(ra);
  auto jb = nlohmann::json::parse(rb);
  ja.erase("wall_time_s");
  jb.erase("wall_time_s");
  if (ja != jb) return fail("reports differ beyond wall time");
  return {};
}

Outcome format_roundtrips() {
  std::mt19937_64 rng(9009);
  const fs::path dir = g_work / "roundtrip";
  fs::create_directories(dir);

  for (int trial = 0; trial < 50; ++trial) {
    const std::uint32_t nx = 1 + static_cast<std::uint32_t>(rng() % 8);
    const std::uint32_t ny = 1 + static_cast<std::uint32_t>(rng() % 8);
    const std::uint32_t nl = 1 + static_cast<std::uint32_t>(rng() % 6);

    std::vector<double> wavelengths(nl);
    for (std::uint32_t k = 0; k < nl; ++k) {
      wavelengths[k] = 700.0 + 15.0 * k + rcassi::uniform53(rng);
    }
    std::vector<double> data(static_cast<std::size_t>(nx) * ny * nl);
    for (double& v : data) {
      v = static_cast<double>(
          static_cast<float>(200.0 * rcassi::uniform53(rng) - 50.0));
    }
    const rcassi::SpectralCube cube(nx, ny, rcassi::WavelengthGrid(wavelengths),
                                    data);
    const auto cube_path = (dir / "cube.hsc").string();
    rcassi::write_cube(cube, cube_path);
    const auto cube_back = rcassi::read_cube(cube_path);
    if (cube_back.data != cube.data ||
        cube_back.grid.wavelengths != cube.grid.wavelengths) {
      return fail("cube round trip " + std::to_string(trial));
    }

    const std::uint32_t width = nx + nl - 1;
    std::vector<std::uint8_t> values(static_cast<std::size_t>(width) * ny);
    for (auto& v : values) v = rng() % 2;
    const rcassi::CodedAperture mask(width, ny,
                                     1 - static_cast<std::int32_t>(nl), values);
    const auto mask_path = (dir / "mask.msk").string();
    rcassi::write_mask(mask, mask_path);
    const auto mask_back = rcassi::read_mask(mask_path);
    if (mask_back.values != mask.values ||
        mask_back.origin_offset != mask.origin_offset) {
      return fail("mask round trip " + std::to_string(trial));
    }
  }
  return {};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s <cli-binary>\n", argv[0]);
    return 2;
  }
  g_cli = argv[1];
  g_work = fs::path("tmp_acceptance");
  std::error_code ec;
  fs::remove_all(g_work, ec);
  fs::create_directories(g_work);

  bool all_ok = true;
  all_ok &= run_criterion("adjoint identity", 5.0, adjoint_identity);
  all_ok &= run_criterion("dense operator oracle", 10.0, dense_oracle);
  all_ok &= run_criterion("identity-system recovery", 1.0, identity_recovery);
  all_ok &= run_criterion("letter-phantom recovery", 60.0, letter_recovery);
  all_ok &= run_criterion("material discrimination", 120.0,
                          material_discrimination);
  all_ok &= run_criterion("sub-band stitch grid", 60.0, subband_stitch);
  all_ok &= run_criterion("solver comparison artifact", 120.0, solver_comparison);
  all_ok &= run_criterion("pipeline determinism", 120.0, determinism);
  all_ok &= run_criterion("format round trips", 30.0, format_roundtrips);

  if (!all_ok) {
    std::printf("one or more acceptance criteria failed\n");
    return 1;
  }
  std::printf("all acceptance criteria passed\n");
  return 0;
}
