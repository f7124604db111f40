#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace dysmooth {

/// Failure classes map one-to-one onto CLI exit statuses.
enum class ErrorKind {
  validation,  ///< bad input: bounds, domain, format, resolution, arity
  capacity,    ///< request exceeds a desk-scale cap (dimension, level, order)
  invariant,   ///< internal check failed; indicates a bug or a falsified claim
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string code, const std::string& message)
      : std::runtime_error(message), kind_(kind), code_(std::move(code)) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// Short machine-readable tag, e.g. "bounds", "format", "capacity".
  const std::string& code() const noexcept { return code_; }

 private:
  ErrorKind kind_;
  std::string code_;
};

inline Error validation_error(std::string code, const std::string& message) {
  return Error(ErrorKind::validation, std::move(code), message);
}

inline Error capacity_error(const std::string& message) {
  return Error(ErrorKind::capacity, "capacity", message);
}

inline Error invariant_error(const std::string& message) {
  return Error(ErrorKind::invariant, "invariant", message);
}

const char* to_string(ErrorKind kind);

}  // namespace dysmooth
