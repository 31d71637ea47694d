// Flag-value parsers for the rcassi command line. Header-only and
// CLI11-free so tests can exercise the exact grammar the binary accepts.
// All parsers throw std::invalid_argument with a usage-level message.
#pragma once

#include <charconv>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace rcassi_cli {

struct GridSpec {
  double min_nm = 0.0;
  double max_nm = 0.0;
  std::uint32_t count = 0;
};

struct PointSpec {
  std::uint32_t x = 0;
  std::uint32_t y = 0;
};

struct GlyphArg {
  char character = '?';
  double center_nm = 0.0;
  double fwhm_nm = 40.0;
};

namespace detail {

inline double parse_double(const std::string& text, const std::string& what) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end || text.empty()) {
    throw std::invalid_argument("bad " + what + " '" + text + "'");
  }
  return value;
}

inline std::uint32_t parse_u32(const std::string& text, const std::string& what) {
  std::uint32_t value = 0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end || text.empty()) {
    throw std::invalid_argument("bad " + what + " '" + text + "'");
  }
  return value;
}

inline std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    if (pos == std::string::npos) {
      parts.push_back(text.substr(start));
      return parts;
    }
    parts.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace detail

/// "MIN:MAX:COUNT", e.g. "700:1600:52".
inline GridSpec parse_grid_spec(const std::string& text) {
  const auto parts = detail::split(text, ':');
  if (parts.size() != 3) {
    throw std::invalid_argument("grid spec '" + text + "' is not MIN:MAX:COUNT");
  }
  GridSpec spec;
  spec.min_nm = detail::parse_double(parts[0], "grid minimum");
  spec.max_nm = detail::parse_double(parts[1], "grid maximum");
  spec.count = detail::parse_u32(parts[2], "grid channel count");
  return spec;
}

/// "X,Y[;X,Y...]", e.g. "10,20;30,40".
inline std::vector<PointSpec> parse_points(const std::string& text) {
  std::vector<PointSpec> points;
  for (const auto& part : detail::split(text, ';')) {
    const auto coords = detail::split(part, ',');
    if (coords.size() != 2) {
      throw std::invalid_argument("point '" + part + "' is not X,Y");
    }
    points.push_back({detail::parse_u32(coords[0], "point x"),
                      detail::parse_u32(coords[1], "point y")});
  }
  return points;
}

inline std::string format_points(const std::vector<PointSpec>& points) {
  std::string text;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i > 0) text += ';';
    text += std::to_string(points[i].x) + ',' + std::to_string(points[i].y);
  }
  return text;
}

/// "CHAR@CENTER_NM[:FWHM_NM]", e.g. "U@850" or "P@950:25". FWHM defaults
/// to 40 nm.
inline GlyphArg parse_glyph(const std::string& text) {
  const std::size_t at = text.find('@');
  if (at != 1 || text.size() < 3) {
    throw std::invalid_argument("glyph '" + text + "' is not CHAR@CENTER_NM[:FWHM_NM]");
  }
  GlyphArg glyph;
  glyph.character = text[0];
  const std::string rest = text.substr(2);
  const auto parts = detail::split(rest, ':');
  if (parts.size() > 2) {
    throw std::invalid_argument("glyph '" + text + "' is not CHAR@CENTER_NM[:FWHM_NM]");
  }
  glyph.center_nm = detail::parse_double(parts[0], "glyph center");
  if (parts.size() == 2) {
    glyph.fwhm_nm = detail::parse_double(parts[1], "glyph width");
    if (glyph.fwhm_nm < 0.0) {
      throw std::invalid_argument("glyph width must be nonnegative");
    }
  }
  return glyph;
}

}  // namespace rcassi_cli
