#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace morse2d {

inline constexpr const char* kVersion = "0.1.0";

/// Library error carrying a stable machine-readable code (e.g. "newton-diverged",
/// "point-outside-domain"). The CLI maps codes to exit statuses.
class Error : public std::runtime_error {
public:
  Error(std::string code, const std::string& detail)
      : std::runtime_error(code + ": " + detail), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

private:
  std::string code_;
};

[[noreturn]] inline void fail(const std::string& code, const std::string& detail) {
  throw Error(code, detail);
}

}  // namespace morse2d
