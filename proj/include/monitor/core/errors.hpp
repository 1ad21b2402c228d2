#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace monitor {

// All domain failures carry a stable machine-readable code alongside the
// human-readable message. Codes are what tests and HTTP handlers dispatch on.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

// Record/row validation failure enumerating every violation found.
class ValidationError : public Error {
 public:
  ValidationError(std::string code, const std::string& message,
                  std::vector<std::string> violations = {})
      : Error(std::move(code), message), violations_(std::move(violations)) {}

  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

}  // namespace monitor
