#include "io/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <utility>

#include "core/error.hpp"
#include "solvers/tv.hpp"

namespace rcassi {

namespace {

constexpr std::size_t kMaxSamples = 100'000'000;  // refuse absurd headers

void append_u32(std::vector<std::uint8_t>& buf, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) buf.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void append_i32(std::vector<std::uint8_t>& buf, std::int32_t v) {
  append_u32(buf, static_cast<std::uint32_t>(v));
}

void append_f32(std::vector<std::uint8_t>& buf, float v) {
  append_u32(buf, std::bit_cast<std::uint32_t>(v));
}

void append_f64(std::vector<std::uint8_t>& buf, double v) {
  const std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) buf.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
}

void write_file(const std::string& path, const std::vector<std::uint8_t>& buf) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(out.good(), ErrorCode::io_error, "cannot open '" + path + "' for writing");
  out.write(reinterpret_cast<const char*>(buf.data()),
            static_cast<std::streamsize>(buf.size()));
  out.flush();
  require(out.good(), ErrorCode::io_error, "failed writing '" + path + "'");
}

class Reader {
public:
  Reader(const std::string& path, const char* magic, const char* kind) : path_(path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), ErrorCode::io_error, "cannot open '" + path + "' for reading");
    buf_.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    require(!in.bad(), ErrorCode::io_error, "failed reading '" + path + "'");

    require(buf_.size() >= 4, ErrorCode::format_error, context("truncated header"));
    if (!std::equal(magic, magic + 4, buf_.begin())) {
      // Same tag with a different version digit gets a clearer message.
      if (std::equal(magic, magic + 3, buf_.begin())) {
        fail(ErrorCode::format_error, context("unsupported version"));
      }
      fail(ErrorCode::format_error,
           context(std::string("bad magic, expected ") + kind));
    }
    pos_ = 4;
  }

  std::uint32_t u32(const char* what) {
    require(pos_ + 4 <= buf_.size(), ErrorCode::format_error,
            context(std::string("truncated at ") + what));
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(buf_[pos_ + i]) << (8 * i);
    pos_ += 4;
    return v;
  }

  std::int32_t i32(const char* what) { return static_cast<std::int32_t>(u32(what)); }

  double f64(const char* what) {
    require(pos_ + 8 <= buf_.size(), ErrorCode::format_error,
            context(std::string("truncated at ") + what));
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf_[pos_ + i]) << (8 * i);
    pos_ += 8;
    return std::bit_cast<double>(v);
  }

  float f32(const char* what) { return std::bit_cast<float>(u32(what)); }

  std::uint8_t byte(const char* what) {
    require(pos_ < buf_.size(), ErrorCode::format_error,
            context(std::string("truncated at ") + what));
    return buf_[pos_++];
  }

  void finish() {
    require(pos_ == buf_.size(), ErrorCode::format_error,
            context("trailing bytes after payload"));
  }

  std::string context(const std::string& message) const {
    return "'" + path_ + "': " + message;
  }

private:
  std::string path_;
  std::vector<std::uint8_t> buf_;
  std::size_t pos_ = 0;
};

}  // namespace

void write_cube(const SpectralCube& cube, const std::string& path) {
  std::vector<std::uint8_t> buf;
  buf.reserve(16 + 8 * cube.channels() + 4 * cube.size());
  buf.insert(buf.end(), {'H', 'S', 'C', '1'});
  append_u32(buf, cube.nx);
  append_u32(buf, cube.ny);
  append_u32(buf, cube.channels());
  for (double w : cube.grid.wavelengths) append_f64(buf, w);
  for (double v : cube.data) append_f32(buf, static_cast<float>(v));
  write_file(path, buf);
}

SpectralCube read_cube(const std::string& path) {
  Reader r(path, "HSC1", "HSC");
  const std::uint32_t nx = r.u32("nx");
  const std::uint32_t ny = r.u32("ny");
  const std::uint32_t nl = r.u32("n_lambda");
  require(nx >= 1 && ny >= 1 && nl >= 1, ErrorCode::format_error,
          r.context("dimensions must be at least 1"));
  require(static_cast<std::uint64_t>(nx) * ny * nl <= kMaxSamples,
          ErrorCode::format_error, r.context("dimensions are implausibly large"));

  std::vector<double> wavelengths(nl);
  for (std::uint32_t k = 0; k < nl; ++k) {
    wavelengths[k] = r.f64("wavelengths");
    require(std::isfinite(wavelengths[k]) && wavelengths[k] > 0.0,
            ErrorCode::format_error, r.context("wavelengths must be finite and positive"));
    require(k == 0 || wavelengths[k] > wavelengths[k - 1], ErrorCode::format_error,
            r.context("wavelengths must be strictly increasing"));
  }

  std::vector<double> data(static_cast<std::size_t>(nx) * ny * nl);
  for (double& v : data) {
    const float sample = r.f32("samples");
    require(std::isfinite(sample), ErrorCode::format_error,
            r.context("samples must be finite"));
    v = static_cast<double>(sample);
  }
  r.finish();
  return SpectralCube(nx, ny, WavelengthGrid(std::move(wavelengths)), std::move(data));
}

void write_mask(const CodedAperture& mask, const std::string& path) {
  std::vector<std::uint8_t> buf;
  buf.reserve(16 + mask.values.size());
  buf.insert(buf.end(), {'M', 'S', 'K', '1'});
  append_u32(buf, mask.width);
  append_u32(buf, mask.height);
  append_i32(buf, mask.origin_offset);
  buf.insert(buf.end(), mask.values.begin(), mask.values.end());
  write_file(path, buf);
}

CodedAperture read_mask(const std::string& path) {
  Reader r(path, "MSK1", "MSK");
  const std::uint32_t width = r.u32("width");
  const std::uint32_t height = r.u32("height");
  const std::int32_t origin = r.i32("origin_offset");
  require(width >= 1 && height >= 1, ErrorCode::format_error,
          r.context("dimensions must be at least 1"));
  require(static_cast<std::uint64_t>(width) * height <= kMaxSamples,
          ErrorCode::format_error, r.context("dimensions are implausibly large"));
  std::vector<std::uint8_t> values(static_cast<std::size_t>(width) * height);
  for (auto& v : values) {
    v = r.byte("mask values");
    require(v <= 1, ErrorCode::format_error, r.context("mask byte outside {0, 1}"));
  }
  r.finish();
  return CodedAperture(width, height, origin, std::move(values));
}

void write_measurement(const Measurement& meas, const std::string& path) {
  write_cube(SpectralCube(meas.nx, meas.ny, WavelengthGrid({1.0}), meas.data), path);
}

Measurement read_measurement(const std::string& path) {
  SpectralCube cube = read_cube(path);
  require(cube.channels() == 1, ErrorCode::dimension_mismatch,
          "'" + path + "': expected a single-band measurement file");
  return Measurement(cube.nx, cube.ny, std::move(cube.data));
}

bool export_band_pgm(const SpectralCube& cube, std::uint32_t channel,
                     const std::string& path) {
  require(channel < cube.channels(), ErrorCode::invalid_argument,
          "band index outside the cube");
  const std::size_t plane = cube.plane_size();
  const double* band = cube.data.data() + static_cast<std::size_t>(channel) * plane;
  const auto [lo_it, hi_it] = std::minmax_element(band, band + plane);
  const double lo = *lo_it, hi = *hi_it;
  const bool constant = !(hi > lo);

  std::string header =
      "P5\n" + std::to_string(cube.nx) + " " + std::to_string(cube.ny) + "\n255\n";
  std::vector<std::uint8_t> buf(header.begin(), header.end());
  buf.reserve(buf.size() + plane);
  for (std::size_t i = 0; i < plane; ++i) {
    const double v = constant ? 0.0 : (band[i] - lo) / (hi - lo) * 255.0;
    buf.push_back(static_cast<std::uint8_t>(std::lround(v)));
  }
  write_file(path, buf);
  return constant;
}

void export_spectra_csv(const SpectralCube& cube, std::span<const ProbePoint> points,
                        const std::string& path) {
  require(!points.empty(), ErrorCode::invalid_argument, "spectrum export needs points");
  for (const auto& p : points) {
    require(p.x < cube.nx && p.y < cube.ny, ErrorCode::invalid_argument,
            "probe point lies outside the cube");
  }

  std::string text = "wavelength_nm";
  for (std::size_t i = 0; i < points.size(); ++i) {
    text += ",p" + std::to_string(i + 1);
  }
  text += "\n";
  char num[40];
  for (std::uint32_t k = 0; k < cube.channels(); ++k) {
    std::snprintf(num, sizeof num, "%.17g", cube.grid.wavelengths[k]);
    text += num;
    for (const auto& p : points) {
      std::snprintf(num, sizeof num, ",%.17g", cube.at(p.x, p.y, k));
      text += num;
    }
    text += "\n";
  }
  write_file(path, std::vector<std::uint8_t>(text.begin(), text.end()));
}

std::string report_to_json(const RunReport& report) {
  nlohmann::json j;
  nlohmann::json config = nlohmann::json::object();
  for (const auto& [key, value] : report.config_text) config[key] = value;
  for (const auto& [key, value] : report.config_values) config[key] = value;
  j["config"] = std::move(config);

  nlohmann::json seeds = nlohmann::json::object();
  for (const auto& [key, value] : report.seeds) seeds[key] = value;
  j["seeds"] = std::move(seeds);

  std::vector<std::string> warnings = report.warnings;
  if (report.solve) {
    const SolveReport& s = *report.solve;
    j["iterations_run"] = s.iterations_run;
    j["stop_reason"] = to_string(s.stop_reason);
    j["wall_time_s"] = s.wall_time_s;
    j["objective_trace"] = s.objective_trace;
    j["residual_trace"] = s.residual_trace;
    warnings.insert(warnings.end(), s.warnings.begin(), s.warnings.end());
  }

  nlohmann::json metrics = nlohmann::json::object();
  if (report.psnr_db) {
    metrics["psnr_db"] = *report.psnr_db;  // non-finite dumps as null
    if (!std::isfinite(*report.psnr_db)) {
      warnings.push_back("psnr is not finite (reconstruction matches truth exactly)");
    }
  }
  nlohmann::json correlations = nlohmann::json::array();
  for (const auto& c : report.correlations) {
    nlohmann::json entry{{"x", c.x}, {"y", c.y}};
    if (c.r) {
      entry["r"] = *c.r;
    } else {
      entry["error"] = c.error;
    }
    correlations.push_back(std::move(entry));
  }
  metrics["correlations"] = std::move(correlations);
  j["metrics"] = std::move(metrics);
  j["warnings"] = warnings;

  return j.dump(2) + "\n";
}

void write_report(const RunReport& report, const std::string& path) {
  const std::string text = report_to_json(report);
  write_file(path, std::vector<std::uint8_t>(text.begin(), text.end()));
}

}  // namespace rcassi
