#pragma once

// Fixture varieties, random instances and independent oracles shared by the
// unit tests and the acceptance runner. Oracles here avoid the library code
// path they check.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "intcond/intcond.hpp"

namespace intcond::testing_support {

inline CVec vec(std::initializer_list<cplx> xs) {
  CVec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (cplx x : xs) v(i++) = x;
  return v;
}

inline CMat row(std::initializer_list<cplx> xs) { return vec(xs).transpose(); }

inline Variety conic() {
  return Variety::hypersurface(HomogeneousPoly(3, 2, {{{1, 0, 1}, 1.0}, {{0, 2, 0}, -1.0}}));
}

// x1^2 x2 - x0^2 (x0 + x2), node at (0:0:1)
inline Variety nodal_cubic() {
  return Variety::hypersurface(HomogeneousPoly(3, 3, {{{0, 2, 1}, 1.0}, {{3, 0, 0}, -1.0}, {{2, 0, 1}, -1.0}}));
}

// Klein quartic x0^3 x1 + x1^3 x2 + x2^3 x0 (smooth)
inline Variety klein_quartic() {
  return Variety::hypersurface(HomogeneousPoly(3, 4, {{{3, 1, 0}, 1.0}, {{0, 3, 1}, 1.0}, {{1, 0, 3}, 1.0}}));
}

inline Variety fermat_quartic() {
  return Variety::hypersurface(HomogeneousPoly(3, 4, {{{4, 0, 0}, 1.0}, {{0, 4, 0}, 1.0}, {{0, 0, 4}, 1.0}}));
}

// x0 x3 - x1 x2 in P^3
inline Variety quadric_surface() {
  return Variety::hypersurface(HomogeneousPoly(4, 2, {{{1, 0, 0, 1}, 1.0}, {{0, 1, 1, 0}, -1.0}}));
}

inline Variety twisted_cubic() {
  return Variety::param_curve({HomogeneousPoly(2, 3, {{{3, 0}, 1.0}}), HomogeneousPoly(2, 3, {{{2, 1}, 1.0}}),
                               HomogeneousPoly(2, 3, {{{1, 2}, 1.0}}), HomogeneousPoly(2, 3, {{{0, 3}, 1.0}})});
}

// The twisted cubic cut out by the 2x2 minors x0x2 - x1^2, x1x3 - x2^2, x0x3 - x1x2.
inline std::vector<HomogeneousPoly> twisted_cubic_minors() {
  return {HomogeneousPoly(4, 2, {{{1, 0, 1, 0}, 1.0}, {{0, 2, 0, 0}, -1.0}}),
          HomogeneousPoly(4, 2, {{{0, 1, 0, 1}, 1.0}, {{0, 0, 2, 0}, -1.0}}),
          HomogeneousPoly(4, 2, {{{1, 0, 0, 1}, 1.0}, {{0, 1, 1, 0}, -1.0}})};
}

inline Variety hyperplane(const CVec& a) { return Variety::hypersurface(HomogeneousPoly::linear(a)); }

template <class Rng>
Variety random_plane_curve(int degree, Rng& rng) {
  std::map<std::vector<int>, cplx> t;
  for (int a = 0; a <= degree; ++a)
    for (int b = 0; a + b <= degree; ++b) t[{a, b, degree - a - b}] = complex_gaussian(rng);
  return Variety::hypersurface(HomogeneousPoly(3, degree, t));
}

struct Instance {
  Subspace l;
  ProjPoint z;
  IntersectionSet witness;
};

/// Uniform L of complementary dimension and a uniformly chosen point of Z cap L.
template <class Rng>
Instance random_instance(const Variety& v, Rng& rng) {
  for (;;) {
    Subspace l = sample_uniform(v.ambient_dim(), v.codim() + 1, rng);
    IntersectionSet w = intersect(v, l);
    bool ok = w.size() > 0;
    for (std::size_t i = 0; i < w.size(); ++i) ok = ok && w.transversal[i];
    if (!ok) continue;
    std::uniform_int_distribution<std::size_t> pick(0, w.size() - 1);
    const ProjPoint z = w.points[pick(rng)];
    return {std::move(l), z, std::move(w)};
  }
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

/// Matrix with orthonormal-row kernel representation of L mixed by a random
/// m x m factor of prescribed condition number.
template <class Rng>
CMat mixed_kernel_matrix(const Subspace& l, double cond, Rng& rng) {
  const CMat k = l.kernel_matrix();
  const Eigen::Index m = k.rows();
  RVec s(m);
  for (Eigen::Index i = 0; i < m; ++i) s(i) = m == 1 ? 1.0 : std::pow(cond, -static_cast<double>(i) / (m - 1));
  const CMat u = random_unitary(m, rng);
  const CMat w = random_unitary(m, rng);
  return u * s.cast<cplx>().asDiagonal() * w.adjoint() * k;
}

// ---------------------------------------------------------------------------
// Independent oracle for the conic: the solution map of ker A cap {x0x2 = x1^2}
// by the quadratic formula, differentiated by central differences.

/// Points of ker a cap conic for a 1x3 row a (a2 != 0), nearest to z.
inline CVec conic_line_point_near(const CMat& a, const CVec& z) {
  // Basis p = (1, 0, -a0/a2), q = (0, 1, -a1/a2); x = p + t q (plus the point q
  // at infinity of the chart, which is never near z in the oracle's use).
  const cplx a0 = a(0, 0), a1 = a(0, 1), a2 = a(0, 2);
  const CVec p = vec({1.0, 0.0, -a0 / a2});
  const CVec q = vec({0.0, 1.0, -a1 / a2});
  // x0 x2 - x1^2 with x = p + t q: (p0 + t q0)(p2 + t q2) - (p1 + t q1)^2
  const cplx c2 = q(0) * q(2) - q(1) * q(1);
  const cplx c1 = p(0) * q(2) + q(0) * p(2) - 2.0 * p(1) * q(1);
  const cplx c0 = p(0) * p(2) - p(1) * p(1);
  std::vector<CVec> cands;
  if (std::abs(c2) < 1e-14) {
    cands.push_back(p - (c0 / c1) * q);
  } else {
    const cplx disc = std::sqrt(c1 * c1 - 4.0 * c2 * c0);
    cands.push_back(p + ((-c1 + disc) / (2.0 * c2)) * q);
    cands.push_back(p + ((-c1 - disc) / (2.0 * c2)) * q);
  }
  CVec best;
  double best_d = 1e300;
  for (const CVec& c : cands) {
    const CVec u = c / c.norm();
    const double d = std::sqrt(std::max(0.0, 1.0 - std::norm(u.dot(z))));
    if (d < best_d) {
      best_d = d;
      best = u;
    }
  }
  return best;
}

/// ||A|| * ||D_A G|| for the conic via the closed-form solve above.
inline double conic_kercond_oracle(const CMat& a, const CVec& z, double h = 1e-6) {
  const CMat an = a / a.norm();  // 1-row matrix: Frobenius = spectral norm
  const CVec z0 = conic_line_point_near(an, z);
  // orthonormal basis of z0^perp
  const CMat z0m = z0;
  Eigen::HouseholderQR<CMat> qr(z0m);
  const CMat qfull = qr.householderQ();
  const CMat frame = qfull.rightCols(2);
  Eigen::MatrixXd j(4, 6);
  int col = 0;
  for (int k = 0; k < 3; ++k)
    for (int part = 0; part < 2; ++part) {
      CMat e = CMat::Zero(1, 3);
      e(0, k) = part == 0 ? cplx(1, 0) : cplx(0, 1);
      const CVec zp = conic_line_point_near(an + h * e, z0);
      const CVec zm = conic_line_point_near(an - h * e, z0);
      const CVec d = frame.adjoint() * ((zp / z0.dot(zp) - zm / z0.dot(zm)) / (2 * h));
      j.col(col).head(2) = d.real();
      j.col(col).tail(2) = d.imag();
      ++col;
    }
  return Eigen::JacobiSVD<Eigen::MatrixXd>(j).singularValues()(0);
}

/// Fubini-Study distance arccos |<a, b>| of unit vectors.
inline double fs_distance(const CVec& a, const CVec& b) {
  return std::acos(std::min(1.0, std::abs(a.dot(b)) / (a.norm() * b.norm())));
}

/// Number of standard Young tableaux of a k x (n-k) rectangle (hook lengths):
/// an independent count of deg iota(G(k, C^n)).
inline BigInt rectangle_tableaux(int k, int n) {
  const int c = n - k;
  Rational r(factorial(k * c));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < c; ++j) r /= (k - i) + (c - j) - 1;
  return numerator(r);
}

}  // namespace intcond::testing_support
