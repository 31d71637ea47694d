#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "core/error.hpp"

namespace testutil {

// Scratch directory under the test working directory, removed on scope exit.
class TempDir {
public:
  explicit TempDir(const std::string& name) : path_("tmp_" + name) {
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
  std::filesystem::path path_;
};

inline std::vector<std::uint8_t> read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in),
                                   std::istreambuf_iterator<char>());
}

inline void write_bytes(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

// Error code raised by fn, or nullopt if it returned normally.
inline std::optional<rcassi::ErrorCode> code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const rcassi::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

// Message of the rcassi::Error raised by fn, empty if none was thrown.
inline std::string message_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const rcassi::Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace testutil
