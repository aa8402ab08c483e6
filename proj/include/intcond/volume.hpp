#pragma once

// Closed-form volumes of spheres, unitary groups, projective spaces and
// Grassmannians, plus Schubert/Hurwitz hypersurface volume ratios.
//
// Every quantity is kept as an exact rational coefficient times an integer
// power of pi, so identities between formulas can be tested exactly.

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <numbers>
#include <string>

#include "intcond/errors.hpp"

namespace intcond {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// coeff * pi^pi_power.
struct PiMultiple {
  Rational coeff{0};
  int pi_power = 0;

  double value() const {
    return static_cast<double>(coeff) * std::pow(std::numbers::pi, pi_power);
  }
  friend bool operator==(const PiMultiple&, const PiMultiple&) = default;
};

inline PiMultiple operator*(const PiMultiple& a, const PiMultiple& b) {
  return {a.coeff * b.coeff, a.pi_power + b.pi_power};
}

inline PiMultiple operator/(const PiMultiple& a, const PiMultiple& b) {
  if (b.coeff == 0) throw DomainError("PiMultiple: division by zero");
  return {a.coeff / b.coeff, a.pi_power - b.pi_power};
}

inline std::string to_string(const PiMultiple& p) {
  std::string s = p.coeff.str();
  if (p.pi_power != 0) s += " * pi^" + std::to_string(p.pi_power);
  return s;
}

inline BigInt factorial(int k) {
  if (k < 0) throw DomainError("factorial: negative argument");
  BigInt r = 1;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

/// sf(k) = 1! 2! ... k!, sf(0) = 1.
inline BigInt superfactorial(int k) {
  if (k < 0) throw DomainError("superfactorial: negative argument");
  BigInt r = 1;
  BigInt f = 1;
  for (int i = 1; i <= k; ++i) {
    f *= i;
    r *= f;
  }
  return r;
}

/// vol U(n) = 2^n pi^(n(n+1)/2) / sf(n-1).
inline PiMultiple vol_unitary_exact(int n) {
  if (n < 1) throw DomainError("vol_unitary: n must be >= 1");
  return {Rational(BigInt(1) << n, superfactorial(n - 1)), n * (n + 1) / 2};
}
inline double vol_unitary(int n) { return vol_unitary_exact(n).value(); }

/// Volume of the unit sphere S^dim in R^(dim+1), 2 pi^(m/2) / Gamma(m/2) with
/// m = dim + 1. Exact (rational times pi power) only for odd dim.
inline PiMultiple vol_sphere_exact(int dim) {
  if (dim < 1 || dim % 2 == 0) throw DomainError("vol_sphere_exact: odd dimension >= 1 required");
  const int n = (dim + 1) / 2;  // S^(2n-1): 2 pi^n / (n-1)!
  return {Rational(BigInt(2), factorial(n - 1)), n};
}
inline double vol_sphere(int dim) {
  if (dim < 0) throw DomainError("vol_sphere: negative dimension");
  if (dim % 2 == 1) return vol_sphere_exact(dim).value();
  const double m = dim + 1;
  return 2.0 * std::pow(std::numbers::pi, m / 2) / std::tgamma(m / 2);
}

/// Fubini-Study volume of P^n, pi^n / n!.
inline PiMultiple vol_proj_exact(int n) {
  if (n < 0) throw DomainError("vol_proj: n must be >= 0");
  return {Rational(BigInt(1), factorial(n)), n};
}
inline double vol_proj(int n) { return vol_proj_exact(n).value(); }

/// vol G(k, C^n) = vol U(n) / (vol U(k) vol U(n-k)).
inline PiMultiple vol_grassmann_exact(int k, int n) {
  if (!(0 < k && k < n)) throw DomainError("vol_grassmann: need 0 < k < n");
  return vol_unitary_exact(n) / (vol_unitary_exact(k) * vol_unitary_exact(n - k));
}
inline double vol_grassmann(int k, int n) { return vol_grassmann_exact(k, n).value(); }

/// Degree of the Plucker image of G(k, C^n), classical product formula
/// (k(n-k))! prod_{i<k} i! / (n-k+i)!.
inline BigInt plucker_degree_classical(int k, int n) {
  if (!(0 < k && k < n)) throw DomainError("plucker_degree: need 0 < k < n");
  Rational r(factorial(k * (n - k)));
  for (int i = 0; i < k; ++i) r *= Rational(factorial(i), factorial(n - k + i));
  if (denominator(r) != 1) throw NumericalFailure("plucker_degree_classical: non-integral result");
  return numerator(r);
}

/// deg iota(G(k, C^n)) = vol G / vol P^(k(n-k)), checked against the
/// classical formula. Any mismatch is an internal consistency failure.
inline BigInt plucker_degree(int k, int n) {
  const PiMultiple ratio = vol_grassmann_exact(k, n) / vol_proj_exact(k * (n - k));
  if (ratio.pi_power != 0 || denominator(ratio.coeff) != 1)
    throw NumericalFailure("plucker_degree: volume ratio is not an integer");
  const BigInt d = numerator(ratio.coeff);
  // Floating route as well, to keep the double-valued volumes honest.
  const double approx = vol_grassmann(k, n) / vol_proj(k * (n - k));
  if (std::abs(approx - static_cast<double>(d)) > 1e-9 * static_cast<double>(d))
    throw NumericalFailure("plucker_degree: floating volume ratio disagrees with exact value");
  if (d != plucker_degree_classical(k, n))
    throw NumericalFailure("plucker_degree: volume ratio disagrees with the product formula");
  return d;
}

/// vol(H_lin) / vol(G) = (s+1) m / pi for Z of dimension m and codimension s.
inline PiMultiple vol_schubert_lin_ratio_exact(int m, int s) {
  if (m < 1 || s < 1) throw DomainError("vol_schubert_lin_ratio: need m, s >= 1");
  return {Rational((s + 1) * m), -1};
}
inline double vol_schubert_lin_ratio(int m, int s) { return vol_schubert_lin_ratio_exact(m, s).value(); }

/// vol(H) / vol(G) = rdeg * (s+1) m / pi.
inline PiMultiple vol_hypersurface_ratio_exact(int rdeg, int m, int s) {
  if (rdeg < 1) throw DomainError("vol_hypersurface_ratio: rdeg must be >= 1");
  PiMultiple r = vol_schubert_lin_ratio_exact(m, s);
  r.coeff *= rdeg;
  return r;
}
inline double vol_hypersurface_ratio(int rdeg, int m, int s) {
  return vol_hypersurface_ratio_exact(rdeg, m, s).value();
}

struct HurwitzParams {
  int deg_z = 2;
  int sectional_genus = 0;
  int dim_z = 1;   // m
  int codim_z = 1; // s
};

inline void check_hurwitz(const HurwitzParams& p) {
  if (p.deg_z < 1 || p.sectional_genus < 0 || p.dim_z < 1 || p.codim_z < 1)
    throw DomainError("HurwitzParams: need deg >= 1, genus >= 0, dim >= 1, codim >= 1");
  if (p.deg_z == 1)
    throw DomainError("Hurwitz variety of a linear space is not a hypersurface (deg Z = 1)");
}

/// rdeg Sigma(Z) = 2 deg Z + 2 g(Z) - 2.
inline int hurwitz_rdeg(const HurwitzParams& p) {
  check_hurwitz(p);
  return 2 * p.deg_z + 2 * p.sectional_genus - 2;
}

/// vol Sigma(Z) / vol G = (2/pi) (deg Z + g - 1) m (s + 1).
inline PiMultiple hurwitz_vol_ratio_exact(const HurwitzParams& p) {
  check_hurwitz(p);
  return {Rational(2 * (p.deg_z + p.sectional_genus - 1) * p.dim_z * (p.codim_z + 1)), -1};
}
inline double hurwitz_vol_ratio(const HurwitzParams& p) { return hurwitz_vol_ratio_exact(p).value(); }

enum class SectionalKind { plane_curve, hypersurface, rational_curve };

/// Arithmetic genus of a generic curve section. For plane curves and
/// hypersurfaces of degree d the section is a smooth plane curve of degree d.
inline int sectional_genus(SectionalKind kind, int d) {
  if (d < 1) throw DomainError("sectional_genus: degree must be >= 1");
  switch (kind) {
    case SectionalKind::plane_curve:
    case SectionalKind::hypersurface:
      return (d - 1) * (d - 2) / 2;
    case SectionalKind::rational_curve:
      return 0;
  }
  throw CapabilityError("sectional_genus: unsupported variety class");
}

inline SectionalKind sectional_kind_from_string(const std::string& s) {
  if (s == "plane_curve") return SectionalKind::plane_curve;
  if (s == "hypersurface") return SectionalKind::hypersurface;
  if (s == "rational_curve") return SectionalKind::rational_curve;
  throw CapabilityError("sectional_genus: unsupported variety class '" + s + "'");
}

}  // namespace intcond
