#pragma once

#include <stdexcept>
#include <string>

namespace nmzi {

/// Broad failure classes; the CLI maps them onto exit codes.
enum class ErrorCategory {
  Config,          ///< bad or inconsistent user input (exit 2)
  NumericalGuard,  ///< a numerical validity guard tripped (exit 3)
  Usage,           ///< API misuse: mismatched grids, wrong lengths
};

const char* to_string(ErrorCategory c) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, std::string kind, const std::string& what)
      : std::runtime_error(what), category_(category), kind_(std::move(kind)) {}

  ErrorCategory category() const noexcept { return category_; }
  /// Short machine-readable tag, e.g. "aliasing" or "grid-too-narrow".
  const std::string& kind() const noexcept { return kind_; }

 private:
  ErrorCategory category_;
  std::string kind_;
};

/// Configuration/validation error naming the offending key (may be empty).
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& what)
      : Error(ErrorCategory::Config, "config", what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

inline Error guard_error(std::string kind, const std::string& what) {
  return Error(ErrorCategory::NumericalGuard, std::move(kind), what);
}

inline Error usage_error(std::string kind, const std::string& what) {
  return Error(ErrorCategory::Usage, std::move(kind), what);
}

}  // namespace nmzi
