#pragma once

#include <stdexcept>
#include <string>

namespace rcassi {

// Stable categories surfaced through the C boundary.
enum class ErrorCode {
  invalid_argument,
  dimension_mismatch,
  io_error,
  format_error,
  numeric_error,
};

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) fail(code, message);
}

}  // namespace rcassi
