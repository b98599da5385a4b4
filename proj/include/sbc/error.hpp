#pragma once

#include <stdexcept>
#include <string>

namespace sbc {

enum class ErrorCode {
  invalid_argument,
  degenerate_channel,
  singular_impedance,
  passivity_violation,
  order,
  base_phase_range,
  amplitude,
  degenerate_backscatter,
  precision,
  scenario,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Thrown when a numerical routine cannot reach the requested tolerance.
// The best estimate reached so far travels with the exception.
class PrecisionError : public Error {
 public:
  PrecisionError(const std::string& what, double estimate, double achieved_tol)
      : Error(ErrorCode::precision, what),
        estimate_(estimate),
        achieved_tol_(achieved_tol) {}

  double estimate() const noexcept { return estimate_; }
  double achieved_tolerance() const noexcept { return achieved_tol_; }

 private:
  double estimate_;
  double achieved_tol_;
};

class ScenarioError : public Error {
 public:
  explicit ScenarioError(const std::string& what)
      : Error(ErrorCode::scenario, what) {}
};

}  // namespace sbc
