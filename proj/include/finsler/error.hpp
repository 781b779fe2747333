#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

namespace finsler {

/// Failure categories shared by every module. The CLI maps `input` and
/// `domain` to the usage exit code; everything else is a verification failure.
enum class ErrorKind {
  domain,         // argument outside the mathematical domain of an operation
  input,          // malformed or inconsistent input (dimension mismatch, schema)
  model,          // a user-supplied gauge misbehaves (negative, NaN)
  convergence,    // an iterative optimizer failed to certify its answer
  precision,      // quadrature or Monte Carlo missed its requested accuracy
  search,         // root bracketing / eigenvalue bracketing failed
  divergence,     // integrand is not integrable
  integration,    // ODE step underflow
  admissibility,  // profile not admissible for an inequality
  efficiency      // Monte Carlo acceptance rate too low to be useful
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what,
        double value = std::nan(""))
      : std::runtime_error(what), kind_(kind), value_(value) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// Best available estimate attached to the failure (lower bound for a
  /// non-converged dual norm, achieved value for a quadrature), NaN if none.
  double value() const noexcept { return value_; }

 private:
  ErrorKind kind_;
  double value_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what,
                              double value = std::nan("")) {
  throw Error(kind, what, value);
}

inline void require(bool condition, ErrorKind kind, const std::string& what) {
  if (!condition) fail(kind, what);
}

}  // namespace finsler
