#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hopfsym {

enum class ErrorKind {
  too_few_samples,
  non_finite,
  level_out_of_range,
  non_monotone_branch,
  domain_mismatch,
  degenerate_triple,
  positivity_contract,
  no_touch,
  boundary_data,
  nonpositive_F,
  non_invertible,
  time_map_range,
  blow_up,
  residual_too_large,
  convention_mismatch,
  degenerate_curve,
  construction_check,
  invalid_argument,
  io,
};

inline std::string_view to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::too_few_samples: return "too-few-samples";
    case ErrorKind::non_finite: return "non-finite-value";
    case ErrorKind::level_out_of_range: return "level-out-of-range";
    case ErrorKind::non_monotone_branch: return "non-monotone-branch";
    case ErrorKind::domain_mismatch: return "domain-mismatch";
    case ErrorKind::degenerate_triple: return "degenerate-triple";
    case ErrorKind::positivity_contract: return "positivity-contract";
    case ErrorKind::no_touch: return "no-touch";
    case ErrorKind::boundary_data: return "boundary-data";
    case ErrorKind::nonpositive_F: return "nonpositive-F";
    case ErrorKind::non_invertible: return "non-invertible";
    case ErrorKind::time_map_range: return "time-map-range";
    case ErrorKind::blow_up: return "blow-up";
    case ErrorKind::residual_too_large: return "residual-too-large";
    case ErrorKind::convention_mismatch: return "convention-mismatch";
    case ErrorKind::degenerate_curve: return "degenerate-curve";
    case ErrorKind::construction_check: return "construction-check";
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace hopfsym
