#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace intcond {

/// Why an instance has infinite condition. Ill-posedness is a property of the
/// input, not a failure of the computation.
enum class IllPosedReason { none, nontransversal, singular_point, positive_dimensional };

inline std::string_view to_string(IllPosedReason r) {
  switch (r) {
    case IllPosedReason::none: return "none";
    case IllPosedReason::nontransversal: return "nontransversal";
    case IllPosedReason::singular_point: return "singular_point";
    case IllPosedReason::positive_dimensional: return "positive_dimensional";
  }
  return "none";
}

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-contract input (shape mismatch, bad tolerance, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The requested (variety, subspace) combination is not supported by a solver.
class CapabilityError : public Error {
 public:
  using Error::Error;
};

/// The algorithm could not produce an answer (iteration cap, singular system
/// that should not be singular, ...).
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

/// The mathematical problem is ill-posed at this input.
class IllPosedError : public Error {
 public:
  IllPosedError(IllPosedReason reason, const std::string& what)
      : Error(what), reason_(reason) {}
  IllPosedReason reason() const noexcept { return reason_; }

 private:
  IllPosedReason reason_;
};

/// Homotopy tracking could not continue past parameter `t`.
class PathFailure : public NumericalFailure {
 public:
  PathFailure(double t, double local_kappa, const std::string& what)
      : NumericalFailure(what), t_(t), local_kappa_(local_kappa) {}
  double t() const noexcept { return t_; }
  double local_kappa() const noexcept { return local_kappa_; }

 private:
  double t_;
  double local_kappa_;
};

}  // namespace intcond
