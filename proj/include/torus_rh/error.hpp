#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

namespace torus_rh {

using cplx = std::complex<double>;

enum class ErrorKind {
  invalid_argument,
  nonconvergent_modulus,
  overflow,
  branch_point_eval,
  quadrature_failure,
  path_violation,
  divisor_mismatch,
  abel_condition_violated,
  inconsistent_ratio,
  pole_mismatch,
  pole_proximity,
  off_contour,
  singular_set_eval,
  undefined_phase,
  sampling_too_close,
  degenerate_fit,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Every domain failure in the library is reported through this type; the
// kind is what callers (and the CLI exit-code mapping) dispatch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_argument: return "InvalidArgument";
    case ErrorKind::nonconvergent_modulus: return "NonconvergentModulus";
    case ErrorKind::overflow: return "Overflow";
    case ErrorKind::branch_point_eval: return "BranchPointEval";
    case ErrorKind::quadrature_failure: return "QuadratureFailure";
    case ErrorKind::path_violation: return "PathViolation";
    case ErrorKind::divisor_mismatch: return "DivisorMismatch";
    case ErrorKind::abel_condition_violated: return "AbelConditionViolated";
    case ErrorKind::inconsistent_ratio: return "InconsistentRatio";
    case ErrorKind::pole_mismatch: return "PoleMismatch";
    case ErrorKind::pole_proximity: return "PoleProximity";
    case ErrorKind::off_contour: return "OffContour";
    case ErrorKind::singular_set_eval: return "SingularSetEval";
    case ErrorKind::undefined_phase: return "UndefinedPhase";
    case ErrorKind::sampling_too_close: return "SamplingTooClose";
    case ErrorKind::degenerate_fit: return "DegenerateFit";
  }
  return "Unknown";
}

}  // namespace torus_rh
