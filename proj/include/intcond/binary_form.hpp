#pragma once

// Binary forms sum_k c_k u^k v^(d-k) and their roots on P^1.

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <vector>

#include "intcond/linalg.hpp"

namespace intcond {

/// coeffs[k] multiplies u^k v^(degree - k).
struct BinaryForm {
  std::vector<cplx> coeffs;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }

  cplx operator()(cplx u, cplx v) const {
    // Horner in whichever variable is larger, for stability.
    const int d = degree();
    if (std::abs(u) >= std::abs(v)) {
      const cplx t = v / u;
      cplx acc = 0.0;
      for (int k = 0; k <= d; ++k) acc = acc * t + coeffs[static_cast<std::size_t>(k)];
      return acc * std::pow(u, d);
    }
    const cplx t = u / v;
    cplx acc = 0.0;
    for (int k = d; k >= 0; --k) acc = acc * t + coeffs[static_cast<std::size_t>(k)];
    return acc * std::pow(v, d);
  }

  double max_abs() const {
    double m = 0.0;
    for (const cplx& c : coeffs) m = std::max(m, std::abs(c));
    return m;
  }
};

inline BinaryForm operator*(const BinaryForm& a, const BinaryForm& b) {
  BinaryForm r;
  r.coeffs.assign(a.coeffs.size() + b.coeffs.size() - 1, cplx{});
  for (std::size_t i = 0; i < a.coeffs.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs.size(); ++j) r.coeffs[i + j] += a.coeffs[i] * b.coeffs[j];
  return r;
}

inline BinaryForm& operator+=(BinaryForm& a, const BinaryForm& b) {
  if (a.coeffs.empty()) {
    a = b;
    return a;
  }
  if (a.coeffs.size() != b.coeffs.size()) throw DomainError("BinaryForm: degree mismatch in sum");
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) a.coeffs[i] += b.coeffs[i];
  return a;
}

inline BinaryForm operator+(BinaryForm a, const BinaryForm& b) {
  a += b;
  return a;
}

inline BinaryForm operator*(cplx s, BinaryForm a) {
  for (auto& c : a.coeffs) c *= s;
  return a;
}

/// A root (u : v) of a binary form, stored with |u|^2 + |v|^2 = 1.
struct ProjectiveRoot {
  cplx u;
  cplx v;
  int multiplicity = 1;
};

struct BinaryRoots {
  std::vector<ProjectiveRoot> roots;
  bool multiplicity_ambiguous = false;  // a root pair sits near the clustering threshold
};

namespace detail {

// Roots of c_0 + c_1 t + ... + c_d t^d with c_d != 0 (companion matrix).
inline std::vector<cplx> univariate_roots(const std::vector<cplx>& c) {
  const int d = static_cast<int>(c.size()) - 1;
  if (d <= 0) return {};
  if (d == 1) return {-c[0] / c[1]};
  CMat comp = CMat::Zero(d, d);
  for (int i = 1; i < d; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < d; ++i) comp(i, d - 1) = -c[static_cast<std::size_t>(i)] / c[static_cast<std::size_t>(d)];
  Eigen::ComplexEigenSolver<CMat> es(comp, false);
  if (es.info() != Eigen::Success) throw NumericalFailure("companion eigenvalues did not converge");
  std::vector<cplx> out(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) out[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
  return out;
}

inline void normalize_root(cplx& u, cplx& v) {
  const double n = std::hypot(std::abs(u), std::abs(v));
  u /= n;
  v /= n;
}

// Newton polish in the affine chart where the root is bounded.
inline void polish(const BinaryForm& f, cplx& u, cplx& v) {
  const int d = f.degree();
  const bool chart_u = std::abs(u) >= std::abs(v);  // t = v/u, u = 1
  cplx t = chart_u ? v / u : u / v;
  auto eval = [&](cplx x, cplx& val, cplx& der) {
    val = 0.0;
    der = 0.0;
    if (chart_u) {
      // g(t) = sum_k c_k t^(d-k)
      for (int k = 0; k <= d; ++k) {
        der = der * x + val;
        val = val * x + f.coeffs[static_cast<std::size_t>(k)];
      }
    } else {
      // g(t) = sum_k c_k t^k
      for (int k = d; k >= 0; --k) {
        der = der * x + val;
        val = val * x + f.coeffs[static_cast<std::size_t>(k)];
      }
    }
  };
  cplx val, der;
  eval(t, val, der);
  for (int it = 0; it < 8; ++it) {
    if (std::abs(der) == 0.0) break;
    const cplx step = val / der;
    const cplx t_new = t - step;
    cplx v2, d2;
    eval(t_new, v2, d2);
    if (!(std::abs(v2) < std::abs(val)) || std::abs(step) > 1e-3 * std::max(1.0, std::abs(t))) break;
    t = t_new;
    val = v2;
    der = d2;
    if (std::abs(step) <= 4 * kMachineEps * std::max(1.0, std::abs(t))) break;
  }
  if (chart_u) {
    u = 1.0;
    v = t;
  } else {
    u = t;
    v = 1.0;
  }
  normalize_root(u, v);
}

}  // namespace detail

/// All roots of a nonzero binary form on P^1 with multiplicities.
///
/// Exact-zero end coefficients (up to 1e-14 relative) give roots at (1:0) and
/// (0:1); the remaining polynomial is solved through the companion matrix in
/// the chart whose leading coefficient is larger, then polished by Newton.
/// Roots within chordal distance `cluster_tol` are merged into one root with
/// multiplicity.
inline BinaryRoots binary_roots(const BinaryForm& f, double cluster_tol = 1e-6) {
  const int d = f.degree();
  const double scale = f.max_abs();
  if (d < 0 || scale == 0.0) throw DomainError("binary_roots: zero form");
  const double negligible = 1e-14 * scale;

  int lo = 0;  // c_0 = ... = c_{lo-1} = 0: u^lo divides f, root (0:1)
  while (lo <= d && std::abs(f.coeffs[static_cast<std::size_t>(lo)]) <= negligible) ++lo;
  int hi = d;  // c_{hi+1} = ... = c_d = 0: v^(d-hi) divides f, root (1:0)
  while (hi >= lo && std::abs(f.coeffs[static_cast<std::size_t>(hi)]) <= negligible) --hi;

  std::vector<ProjectiveRoot> raw;
  for (int i = 0; i < lo; ++i) raw.push_back({0.0, 1.0, 1});
  for (int i = hi + 1; i <= d; ++i) raw.push_back({1.0, 0.0, 1});

  if (hi > lo) {
    std::vector<cplx> mid(f.coeffs.begin() + lo, f.coeffs.begin() + hi + 1);
    const bool chart_v = std::abs(mid.back()) >= std::abs(mid.front());
    if (!chart_v) std::reverse(mid.begin(), mid.end());
    for (cplx t : detail::univariate_roots(mid)) {
      cplx u = chart_v ? t : cplx(1.0);
      cplx v = chart_v ? cplx(1.0) : t;
      detail::normalize_root(u, v);
      detail::polish(f, u, v);
      raw.push_back({u, v, 1});
    }
  }

  // Greedy clustering in chordal distance on P^1.
  auto chordal = [](const ProjectiveRoot& a, const ProjectiveRoot& b) {
    return std::abs(a.u * b.v - a.v * b.u);
  };
  BinaryRoots out;
  std::vector<bool> used(raw.size(), false);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    // Average members in the chart of the first one.
    const bool chart_u = std::abs(raw[i].u) >= std::abs(raw[i].v);
    cplx sum = chart_u ? raw[i].v / raw[i].u : raw[i].u / raw[i].v;
    int mult = 1;
    for (std::size_t j = i + 1; j < raw.size(); ++j) {
      if (used[j]) continue;
      const double dist = chordal(raw[i], raw[j]);
      if (dist <= cluster_tol) {
        used[j] = true;
        ++mult;
        sum += chart_u ? raw[j].v / raw[j].u : raw[j].u / raw[j].v;
      } else if (dist <= 10 * cluster_tol) {
        out.multiplicity_ambiguous = true;
      }
    }
    const cplx t = sum / static_cast<double>(mult);
    cplx u = chart_u ? cplx(1.0) : t;
    cplx v = chart_u ? t : cplx(1.0);
    detail::normalize_root(u, v);
    out.roots.push_back({u, v, mult});
  }
  return out;
}

}  // namespace intcond
