#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace finsler {

/// Failure categories. The CLI reports these verbatim in its error objects.
enum class ErrorKind {
  dimension_mismatch,
  not_positive,
  branch_cut,
  singular_point,
  precondition,
  domain,
  frame_break,
  integrator,
  singular_drift,
  convergence,
  parse,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::dimension_mismatch: return "dimension_mismatch";
    case ErrorKind::not_positive: return "not_positive";
    case ErrorKind::branch_cut: return "branch_cut";
    case ErrorKind::singular_point: return "singular_point";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::domain: return "domain";
    case ErrorKind::frame_break: return "frame_break";
    case ErrorKind::integrator: return "integrator";
    case ErrorKind::singular_drift: return "singular_drift";
    case ErrorKind::convergence: return "convergence";
    case ErrorKind::parse: return "parse";
  }
  return "unknown";
}

}  // namespace finsler
