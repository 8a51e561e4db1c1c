#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>

namespace gevrey {

// Machine-readable error kinds. The string form is what the CLI emits in
// its structured error reports.
enum class ErrorCode {
  domain,
  schema,
  singular,
  resonance,
  normalization_impossible,
  degenerate_spectrum,
  sector_too_wide,
  radii_infeasible,
  insufficient_data,
  continuation_failed,
  pole_obstruction,
  evaluation,
  branch,
  numerical,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::domain: return "domain";
    case ErrorCode::schema: return "schema";
    case ErrorCode::singular: return "singular";
    case ErrorCode::resonance: return "resonance";
    case ErrorCode::normalization_impossible: return "normalization_impossible";
    case ErrorCode::degenerate_spectrum: return "degenerate_spectrum";
    case ErrorCode::sector_too_wide: return "sector_too_wide";
    case ErrorCode::radii_infeasible: return "radii_infeasible";
    case ErrorCode::insufficient_data: return "insufficient_data";
    case ErrorCode::continuation_failed: return "continuation_failed";
    case ErrorCode::pole_obstruction: return "pole_obstruction";
    case ErrorCode::evaluation: return "evaluation";
    case ErrorCode::branch: return "branch";
    case ErrorCode::numerical: return "numerical";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Constant term of a matrix (series) is not invertible.
class SingularError : public Error {
 public:
  SingularError(const std::string& what, double norm, double smallest_sv)
      : Error(ErrorCode::singular, what), norm_(norm), smallest_sv_(smallest_sv) {}
  double norm() const noexcept { return norm_; }
  double smallest_singular_value() const noexcept { return smallest_sv_; }

 private:
  double norm_;
  double smallest_sv_;
};

/// (eps k I - A01(eps)) is numerically singular: eps*k sits on an eigenvalue.
class ResonanceError : public Error {
 public:
  ResonanceError(const std::string& what, int k, std::complex<double> eps)
      : Error(ErrorCode::resonance, what), k_(k), eps_(eps) {}
  int k() const noexcept { return k_; }
  std::complex<double> eps() const noexcept { return eps_; }

 private:
  int k_;
  std::complex<double> eps_;
};

class RadiiInfeasibleError : public Error {
 public:
  RadiiInfeasibleError(const std::string& what, int n, int m, double alpha)
      : Error(ErrorCode::radii_infeasible, what), n_(n), m_(m), alpha_(alpha) {}
  std::pair<int, int> limiting_block() const noexcept { return {n_, m_}; }
  double alpha() const noexcept { return alpha_; }

 private:
  int n_;
  int m_;
  double alpha_;
};

class PoleObstructionError : public Error {
 public:
  PoleObstructionError(const std::string& what, std::complex<double> pole, double clearance)
      : Error(ErrorCode::pole_obstruction, what), pole_(pole), clearance_(clearance) {}
  std::complex<double> pole() const noexcept { return pole_; }
  double clearance() const noexcept { return clearance_; }

 private:
  std::complex<double> pole_;
  double clearance_;
};

}  // namespace gevrey
