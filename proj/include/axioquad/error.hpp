#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace axioquad {

// Root of every exception thrown by the library. `kind()` is a stable,
// machine-readable tag used by the CLI diagnostics.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  [[nodiscard]] virtual std::string_view kind() const noexcept { return "error"; }
};

// Caller violated a documented precondition (bad interval, eps <= 0, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
  [[nodiscard]] std::string_view kind() const noexcept override { return "precondition"; }
};

// A scalar function could not be evaluated at a requested point. The
// message names the point (h, cell index, trial site).
class EvaluationError : public Error {
 public:
  using Error::Error;
  [[nodiscard]] std::string_view kind() const noexcept override { return "evaluation"; }
};

}  // namespace axioquad
