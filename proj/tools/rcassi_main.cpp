// Command-line pipeline driver: phantom generation, mask generation,
// measurement simulation, reconstruction, evaluation, and sub-band
// stitching, all through the public C API.
//
// Exit codes: 0 success, 2 usage error (flag parsing/validation),
// 1 runtime or data error.

#include <rcassi.h>

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "cli_util.hpp"

namespace {

struct RunError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(rcassi_status status) {
  if (status != RCASSI_OK) throw RunError(rcassi_last_error());
}

template <auto Destroy>
struct FnDeleter {
  template <typename T>
  void operator()(T* ptr) const {
    Destroy(ptr);
  }
};

using CubePtr = std::unique_ptr<rcassi_cube, FnDeleter<&rcassi_cube_destroy>>;
using MaskPtr = std::unique_ptr<rcassi_mask, FnDeleter<&rcassi_mask_destroy>>;
using MeasPtr =
    std::unique_ptr<rcassi_measurement, FnDeleter<&rcassi_measurement_destroy>>;
using OperatorPtr =
    std::unique_ptr<rcassi_operator, FnDeleter<&rcassi_operator_destroy>>;
using ReportPtr = std::unique_ptr<rcassi_report, FnDeleter<&rcassi_report_destroy>>;

CubePtr read_cube(const std::string& path) {
  rcassi_cube* raw = nullptr;
  check(rcassi_cube_read(path.c_str(), &raw));
  return CubePtr(raw);
}

MaskPtr read_mask(const std::string& path) {
  rcassi_mask* raw = nullptr;
  check(rcassi_mask_read(path.c_str(), &raw));
  return MaskPtr(raw);
}

std::vector<double> grid_wavelengths(const rcassi_cli::GridSpec& spec) {
  std::vector<double> wavelengths(spec.count);
  check(rcassi_make_wavelength_grid(spec.min_nm, spec.max_nm, spec.count,
                                    wavelengths.data()));
  return wavelengths;
}

// Validator factory: accepts any cli_util parser, reports its message as a
// usage error at flag-parse time.
template <typename Parser>
CLI::Validator parses_as(Parser parser, const std::string& name) {
  return CLI::Validator(
      [parser](std::string& input) -> std::string {
        try {
          parser(input);
          return {};
        } catch (const std::invalid_argument& e) {
          return e.what();
        }
      },
      name, name);
}

struct PhantomOpts {
  std::string kind;
  std::uint32_t nx = 0;
  std::uint32_t ny = 0;
  std::string grid;
  std::vector<std::string> glyphs;
  std::string out;
};

void run_phantom(const PhantomOpts& o) {
  if (o.kind == "materials" && !o.glyphs.empty()) {
    throw UsageError("--glyph applies to --kind letters only");
  }
  const auto spec = rcassi_cli::parse_grid_spec(o.grid);
  const auto wavelengths = grid_wavelengths(spec);

  rcassi_cube* raw = nullptr;
  if (o.kind == "letters") {
    std::vector<char> characters;
    std::vector<double> centers;
    std::vector<double> fwhms;
    for (const auto& text : o.glyphs) {
      const auto glyph = rcassi_cli::parse_glyph(text);
      characters.push_back(glyph.character);
      centers.push_back(glyph.center_nm);
      fwhms.push_back(glyph.fwhm_nm);
    }
    check(rcassi_letter_target(characters.data(), centers.data(), fwhms.data(),
                               static_cast<std::uint32_t>(characters.size()), o.nx,
                               o.ny, wavelengths.data(), spec.count, &raw));
  } else {
    check(rcassi_material_scene(o.nx, o.ny, wavelengths.data(), spec.count, &raw));
  }
  CubePtr cube(raw);
  check(rcassi_cube_write(cube.get(), o.out.c_str()));
}

struct MaskOpts {
  std::uint32_t nx = 0;
  std::uint32_t ny = 0;
  std::uint32_t nlam = 0;
  double density = 0.5;
  std::uint64_t seed = 42;
  std::string out;
};

void run_mask(const MaskOpts& o) {
  rcassi_mask* raw = nullptr;
  check(rcassi_random_mask(o.nx, o.ny, o.nlam, o.density, o.seed, &raw));
  MaskPtr mask(raw);
  check(rcassi_mask_write(mask.get(), o.out.c_str()));
}

struct SimulateOpts {
  std::string scene;
  std::string mask;
  double noise_sigma = 0.0;
  std::uint64_t seed = 42;
  std::string out;
};

void run_simulate(const SimulateOpts& o) {
  const CubePtr scene = read_cube(o.scene);
  const MaskPtr mask = read_mask(o.mask);

  std::uint32_t nx = 0, ny = 0, n_lambda = 0;
  check(rcassi_cube_dims(scene.get(), &nx, &ny, &n_lambda));
  std::vector<double> wavelengths(n_lambda);
  check(rcassi_cube_wavelengths(scene.get(), wavelengths.data()));

  rcassi_operator* op_raw = nullptr;
  check(rcassi_operator_create(nx, ny, n_lambda, wavelengths.data(), mask.get(),
                               &op_raw));
  OperatorPtr op(op_raw);

  rcassi_measurement* clean_raw = nullptr;
  check(rcassi_forward(op.get(), scene.get(), &clean_raw));
  MeasPtr clean(clean_raw);

  rcassi_measurement* noisy_raw = nullptr;
  check(rcassi_add_noise(clean.get(), o.noise_sigma, o.seed, &noisy_raw));
  MeasPtr noisy(noisy_raw);

  check(rcassi_measurement_write(noisy.get(), o.out.c_str()));
}

struct ReconstructOpts {
  std::string meas;
  std::string mask;
  std::string grid;
  std::string algo;
  double tau = -1.0;  // auto
  double alpha = 1.9;
  double beta = 1.0;
  std::uint32_t iters = 200;
  double tol = 1e-5;
  std::string out;
  std::string report_path;
  bool twist_only_flags_used = false;
};

void run_reconstruct(const ReconstructOpts& o) {
  rcassi_measurement* meas_raw = nullptr;
  check(rcassi_measurement_read(o.meas.c_str(), &meas_raw));
  const MeasPtr meas(meas_raw);
  const MaskPtr mask = read_mask(o.mask);

  const auto spec = rcassi_cli::parse_grid_spec(o.grid);
  const auto wavelengths = grid_wavelengths(spec);

  std::uint32_t nx = 0, ny = 0;
  check(rcassi_measurement_dims(meas.get(), &nx, &ny));
  rcassi_operator* op_raw = nullptr;
  check(rcassi_operator_create(nx, ny, spec.count, wavelengths.data(), mask.get(),
                               &op_raw));
  OperatorPtr op(op_raw);

  rcassi_report* report_raw = nullptr;
  check(rcassi_report_create(&report_raw));
  ReportPtr report(report_raw);
  check(rcassi_report_set_config_text(report.get(), "grid", o.grid.c_str()));

  rcassi_cube* cube_raw = nullptr;
  if (o.algo == "twist") {
    rcassi_twist_config config;
    rcassi_twist_config_init(&config);
    config.tau = o.tau;
    config.alpha = o.alpha;
    config.beta = o.beta;
    config.max_iters = o.iters;
    config.rel_obj_tol = o.tol;
    check(rcassi_twist_solve(op.get(), meas.get(), &config, report.get(),
                             &cube_raw));
  } else {
    if (o.twist_only_flags_used) {
      check(rcassi_report_add_warning(
          report.get(), "--alpha, --beta, and --tol apply to --algo twist only"));
    }
    rcassi_gaptv_config config;
    rcassi_gaptv_config_init(&config);
    config.tv_weight = o.tau;
    config.max_iters = o.iters;
    check(rcassi_gaptv_solve(op.get(), meas.get(), &config, report.get(),
                             &cube_raw));
  }
  const CubePtr cube(cube_raw);

  rcassi_cube* clamped_raw = nullptr;
  check(rcassi_clamp_nonnegative(cube.get(), &clamped_raw));
  const CubePtr clamped(clamped_raw);
  check(rcassi_cube_write(clamped.get(), o.out.c_str()));

  if (!o.report_path.empty()) {
    check(rcassi_report_write_json(report.get(), o.report_path.c_str()));
  }
}

struct EvaluateOpts {
  std::string recon;
  std::string truth;
  std::string points;
  std::string out;
  std::string csv;
};

void run_evaluate(const EvaluateOpts& o) {
  const CubePtr recon = read_cube(o.recon);
  const CubePtr truth = read_cube(o.truth);
  const auto points = rcassi_cli::parse_points(o.points);

  rcassi_report* report_raw = nullptr;
  check(rcassi_report_create(&report_raw));
  ReportPtr report(report_raw);
  check(rcassi_report_set_config_text(report.get(), "points", o.points.c_str()));

  double psnr_db = 0.0;
  check(rcassi_psnr(recon.get(), truth.get(), &psnr_db));
  check(rcassi_report_set_psnr(report.get(), psnr_db));

  for (const auto& point : points) {
    double r = 0.0;
    const rcassi_status status =
        rcassi_spectral_correlation(recon.get(), truth.get(), point.x, point.y, &r);
    if (status == RCASSI_OK) {
      check(rcassi_report_add_correlation(report.get(), point.x, point.y, r));
    } else if (status == RCASSI_ERROR_NUMERIC) {
      const std::string message = rcassi_last_error();
      check(rcassi_report_add_correlation_error(report.get(), point.x, point.y,
                                                message.c_str()));
      const std::string warning = "correlation at (" + std::to_string(point.x) +
                                  ", " + std::to_string(point.y) +
                                  ") undefined: " + message;
      check(rcassi_report_add_warning(report.get(), warning.c_str()));
    } else {
      throw RunError(rcassi_last_error());
    }
  }

  if (!o.csv.empty()) {
    std::vector<std::uint32_t> xs, ys;
    for (const auto& point : points) {
      xs.push_back(point.x);
      ys.push_back(point.y);
    }
    check(rcassi_export_spectra_csv(recon.get(), xs.data(), ys.data(),
                                    static_cast<std::uint32_t>(points.size()),
                                    o.csv.c_str()));
  }

  check(rcassi_report_write_json(report.get(), o.out.c_str()));
}

struct StitchOpts {
  std::string low;
  std::string high;
  std::string out;
};

void run_stitch(const StitchOpts& o) {
  const CubePtr low = read_cube(o.low);
  const CubePtr high = read_cube(o.high);
  rcassi_cube* raw = nullptr;
  check(rcassi_stitch_cubes(low.get(), high.get(), &raw));
  const CubePtr stitched(raw);
  check(rcassi_cube_write(stitched.get(), o.out.c_str()));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"snapshot spectral imaging simulation and reconstruction"};
  app.set_version_flag("--version", std::string(rcassi_version()));
  app.require_subcommand(1);

  const auto grid_check = parses_as(rcassi_cli::parse_grid_spec, "GRID");
  const auto points_check = parses_as(rcassi_cli::parse_points, "POINTS");
  const auto glyph_check = parses_as(rcassi_cli::parse_glyph, "GLYPH");

  PhantomOpts phantom_opts;
  auto* phantom = app.add_subcommand("phantom", "generate a synthetic scene cube");
  phantom->add_option("--kind", phantom_opts.kind, "scene type")
      ->required()
      ->check(CLI::IsMember({"letters", "materials"}));
  phantom->add_option("--nx", phantom_opts.nx, "scene width")->required();
  phantom->add_option("--ny", phantom_opts.ny, "scene height")->required();
  phantom->add_option("--grid", phantom_opts.grid, "wavelength grid MIN:MAX:COUNT")
      ->required()
      ->check(grid_check);
  phantom
      ->add_option("--glyph", phantom_opts.glyphs,
                   "letter glyph CHAR@CENTER_NM[:FWHM_NM] (repeatable)")
      ->check(glyph_check);
  phantom->add_option("--out", phantom_opts.out, "output cube path")->required();

  MaskOpts mask_opts;
  auto* mask = app.add_subcommand("mask", "generate a random coded aperture");
  mask->add_option("--nx", mask_opts.nx, "scene width")->required();
  mask->add_option("--ny", mask_opts.ny, "scene height")->required();
  mask->add_option("--nlam", mask_opts.nlam, "spectral channel count")->required();
  mask->add_option("--density", mask_opts.density, "fraction of open pixels")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  mask->add_option("--seed", mask_opts.seed, "random seed")->capture_default_str();
  mask->add_option("--out", mask_opts.out, "output mask path")->required();

  SimulateOpts simulate_opts;
  auto* simulate = app.add_subcommand("simulate", "render a detector measurement");
  simulate->add_option("--scene", simulate_opts.scene, "input scene cube")
      ->required();
  simulate->add_option("--mask", simulate_opts.mask, "coded aperture")->required();
  simulate
      ->add_option("--noise-sigma", simulate_opts.noise_sigma,
                   "noise std as a fraction of the peak signal")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  simulate->add_option("--seed", simulate_opts.seed, "random seed")
      ->capture_default_str();
  simulate->add_option("--out", simulate_opts.out, "output measurement path")
      ->required();

  ReconstructOpts reconstruct_opts;
  auto* reconstruct =
      app.add_subcommand("reconstruct", "recover a cube from a measurement");
  reconstruct->add_option("--meas", reconstruct_opts.meas, "input measurement")
      ->required();
  reconstruct->add_option("--mask", reconstruct_opts.mask, "coded aperture")
      ->required();
  reconstruct
      ->add_option("--grid", reconstruct_opts.grid, "wavelength grid MIN:MAX:COUNT")
      ->required()
      ->check(grid_check);
  reconstruct->add_option("--algo", reconstruct_opts.algo, "solver")
      ->required()
      ->check(CLI::IsMember({"twist", "gaptv"}));
  reconstruct
      ->add_option("--tau", reconstruct_opts.tau,
                   "regularization weight (default: auto heuristic)")
      ->check(CLI::NonNegativeNumber);
  auto* alpha_opt = reconstruct->add_option("--alpha", reconstruct_opts.alpha,
                                            "twist first-step weight")
                        ->capture_default_str();
  auto* beta_opt = reconstruct->add_option("--beta", reconstruct_opts.beta,
                                           "twist second-step weight")
                       ->capture_default_str();
  reconstruct->add_option("--iters", reconstruct_opts.iters, "iteration cap")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  auto* tol_opt = reconstruct
                      ->add_option("--tol", reconstruct_opts.tol,
                                   "relative objective-change stop threshold")
                      ->capture_default_str()
                      ->check(CLI::NonNegativeNumber);
  reconstruct->add_option("--out", reconstruct_opts.out, "output cube path")
      ->required();
  reconstruct->add_option("--report", reconstruct_opts.report_path,
                          "JSON run report path");

  EvaluateOpts evaluate_opts;
  auto* evaluate =
      app.add_subcommand("evaluate", "score a reconstruction against truth");
  evaluate->add_option("--recon", evaluate_opts.recon, "reconstructed cube")
      ->required();
  evaluate->add_option("--truth", evaluate_opts.truth, "ground-truth cube")
      ->required();
  evaluate
      ->add_option("--points", evaluate_opts.points, "probe points X,Y[;X,Y...]")
      ->required()
      ->check(points_check);
  evaluate->add_option("--out", evaluate_opts.out, "JSON report path")->required();
  evaluate->add_option("--csv", evaluate_opts.csv, "spectra CSV path");

  StitchOpts stitch_opts;
  auto* stitch = app.add_subcommand("stitch", "concatenate two sub-band cubes");
  stitch->add_option("--low", stitch_opts.low, "lower sub-band cube")->required();
  stitch->add_option("--high", stitch_opts.high, "upper sub-band cube")->required();
  stitch->add_option("--out", stitch_opts.out, "output cube path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  reconstruct_opts.twist_only_flags_used =
      alpha_opt->count() > 0 || beta_opt->count() > 0 || tol_opt->count() > 0;

  try {
    if (phantom->parsed()) {
      run_phantom(phantom_opts);
    } else if (mask->parsed()) {
      run_mask(mask_opts);
    } else if (simulate->parsed()) {
      run_simulate(simulate_opts);
    } else if (reconstruct->parsed()) {
      run_reconstruct(reconstruct_opts);
    } else if (evaluate->parsed()) {
      run_evaluate(evaluate_opts);
    } else if (stitch->parsed()) {
      run_stitch(stitch_opts);
    }
  } catch (const UsageError& e) {
    std::cerr << "rcassi: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "rcassi: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
