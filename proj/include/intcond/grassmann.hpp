#pragma once

// Complex Grassmannians G(k, C^N): subspaces stored by orthonormal bases,
// principal angles, the projection and geodesic metrics, Schubert-variety
// distances, Pluecker coordinates, tangent vectors and geodesics.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "intcond/linalg.hpp"

namespace intcond {

/// A point of G(k, C^N), k = dim(), N = ambient_dim(). The basis has
/// orthonormal columns; equality of subspaces is span equality (see same_span).
class Subspace {
 public:
  /// Takes ownership of a basis that is already orthonormal within `tol`.
  static Subspace from_orthonormal(CMat basis, double tol = 1e-10) {
    check_shape(basis);
    const double err = (basis.adjoint() * basis - CMat::Identity(basis.cols(), basis.cols())).norm();
    if (err > tol)
      throw DomainError("Subspace: basis is not orthonormal (error " + std::to_string(err) + ")");
    return Subspace(std::move(basis));
  }

  /// Span of arbitrary full-rank columns.
  static Subspace span_of(const CMat& columns) {
    check_shape(columns);
    return Subspace(orthonormalize(columns));
  }

  /// ker A for a full-row-rank A.
  static Subspace kernel_of(const CMat& a) {
    require_finite(a, "Subspace::kernel_of");
    if (a.rows() >= a.cols()) throw DomainError("Subspace::kernel_of: A must be wide");
    const Eigen::Index r = numerical_rank(a, 1e-12);
    if (r < a.rows()) throw DomainError("Subspace::kernel_of: A is rank deficient");
    return Subspace(complement_basis(orthonormalize(a.adjoint())));
  }

  /// Coordinate subspace span{e_i : i in idx}.
  static Subspace coordinate(Eigen::Index ambient, const std::vector<Eigen::Index>& idx) {
    CMat b = CMat::Zero(ambient, static_cast<Eigen::Index>(idx.size()));
    for (std::size_t j = 0; j < idx.size(); ++j) b(idx[j], static_cast<Eigen::Index>(j)) = 1.0;
    return from_orthonormal(std::move(b));
  }

  Eigen::Index ambient_dim() const { return basis_.rows(); }
  Eigen::Index dim() const { return basis_.cols(); }
  const CMat& basis() const { return basis_; }

  CMat projector() const { return basis_ * basis_.adjoint(); }

  /// Rows of a matrix whose kernel is this subspace (orthonormal rows).
  CMat kernel_matrix() const { return complement_basis(basis_).adjoint(); }

  /// Distance of a vector to the subspace relative to its norm.
  double relative_residual(const CVec& v) const {
    const double nv = v.norm();
    if (nv == 0.0) return 0.0;
    return (v - basis_ * (basis_.adjoint() * v)).norm() / nv;
  }

 private:
  explicit Subspace(CMat basis) : basis_(std::move(basis)) {}

  static void check_shape(const CMat& b) {
    require_finite(b, "Subspace");
    if (b.cols() < 1 || b.cols() >= b.rows())
      throw DomainError("Subspace: need 1 <= dim < ambient_dim, got dim " + std::to_string(b.cols()) +
                        " in C^" + std::to_string(b.rows()));
  }

  CMat basis_;
};

// ---------------------------------------------------------------------------
// Principal angles

/// Principal angles theta_1 <= ... <= theta_r, r = min(dim V1, dim V2).
///
/// The cosines are the singular values of U1^* U2. Angles near zero are
/// recovered from the sines (singular values of the component of U2
/// orthogonal to V1), since arccos loses half the digits there.
inline std::vector<double> principal_angles(const Subspace& v1, const Subspace& v2) {
  if (v1.ambient_dim() != v2.ambient_dim())
    throw DomainError("principal_angles: ambient dimension mismatch");
  const CMat* big = &v1.basis();
  const CMat* small = &v2.basis();
  if (big->cols() < small->cols()) std::swap(big, small);
  const Eigen::Index r = small->cols();

  const CMat cross = big->adjoint() * *small;
  RVec cosines = singular_values(cross);  // nonincreasing, r entries
  const CMat residual = *small - *big * cross;
  RVec sines = singular_values(residual);  // nonincreasing, r entries

  std::vector<double> angles(static_cast<std::size_t>(r));
  for (Eigen::Index j = 0; j < r; ++j) {
    const double c = std::clamp(cosines(j), 0.0, 1.0);
    const double s = std::clamp(sines(r - 1 - j), 0.0, 1.0);
    angles[static_cast<std::size_t>(j)] = c >= std::numbers::sqrt2 / 2 ? std::asin(s) : std::acos(c);
  }
  std::sort(angles.begin(), angles.end());
  return angles;
}

/// Smallest principal angle: the minimum angle between nonzero vectors of V1 and V2.
inline double min_angle(const Subspace& v1, const Subspace& v2) {
  return principal_angles(v1, v2).front();
}

inline void require_same_point_type(const Subspace& a, const Subspace& b, const char* who) {
  if (a.ambient_dim() != b.ambient_dim() || a.dim() != b.dim())
    throw DomainError(std::string(who) + ": subspaces must have equal dimension and ambient space");
}

/// d_p(V1, V2) = sin(max principal angle) = ||P_V1 - P_V2||.
inline double projection_distance(const Subspace& v1, const Subspace& v2) {
  require_same_point_type(v1, v2, "projection_distance");
  return std::sin(principal_angles(v1, v2).back());
}

/// d_p computed directly as the spectral norm of the projector difference.
inline double projector_distance(const Subspace& v1, const Subspace& v2) {
  require_same_point_type(v1, v2, "projector_distance");
  return spectral_norm(v1.projector() - v2.projector());
}

/// d_g(V1, V2) = sqrt(theta_1^2 + ... + theta_r^2).
inline double geodesic_distance(const Subspace& v1, const Subspace& v2) {
  require_same_point_type(v1, v2, "geodesic_distance");
  double acc = 0.0;
  for (double t : principal_angles(v1, v2)) acc += t * t;
  return std::sqrt(acc);
}

/// Span equality test used throughout: d_p below tol.
inline bool same_span(const Subspace& v1, const Subspace& v2, double tol = 1e-8) {
  return v1.ambient_dim() == v2.ambient_dim() && v1.dim() == v2.dim() &&
         projection_distance(v1, v2) <= tol;
}

/// Orthogonal complement W^perp.
inline Subspace complement(const Subspace& w) {
  return Subspace::from_orthonormal(complement_basis(w.basis()), 1e-9);
}

// ---------------------------------------------------------------------------
// Sampling

/// Standard complex Gaussian N(0, 1) (real and imaginary parts of variance 1/2).
template <class Rng>
cplx complex_gaussian(Rng& rng) {
  std::normal_distribution<double> nd(0.0, std::sqrt(0.5));
  const double re = nd(rng);
  const double im = nd(rng);
  return {re, im};
}

template <class Rng>
CMat gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  CMat m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = complex_gaussian(rng);
  return m;
}

/// Haar-random unitary matrix (QR of a Gaussian matrix with phase fix).
template <class Rng>
CMat random_unitary(Eigen::Index n, Rng& rng) {
  for (;;) {
    CMat g = gaussian_matrix(n, n, rng);
    Eigen::HouseholderQR<CMat> qr(g);
    CMat q = qr.householderQ();
    CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
    bool ok = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      const cplx d = r(i, i);
      if (std::abs(d) < 1e-300) { ok = false; break; }
      q.col(i) *= d / std::abs(d);
    }
    if (ok) return q;
  }
}

/// Uniformly (unitarily invariant) distributed point of G(dim, C^ambient_dim).
template <class Rng>
Subspace sample_uniform(Eigen::Index ambient_dim, Eigen::Index dim, Rng& rng) {
  if (dim < 1 || dim >= ambient_dim) throw DomainError("sample_uniform: need 1 <= dim < ambient_dim");
  for (;;) {
    CMat g = gaussian_matrix(ambient_dim, dim, rng);
    if (numerical_rank(g, 1e-10) == dim) return Subspace::span_of(g);
  }
}

// ---------------------------------------------------------------------------
// Pluecker embedding

/// All sorted k-subsets of {0, ..., n-1} in lexicographic order.
inline std::vector<std::vector<Eigen::Index>> lex_subsets(Eigen::Index n, Eigen::Index k) {
  std::vector<std::vector<Eigen::Index>> out;
  std::vector<Eigen::Index> cur(static_cast<std::size_t>(k));
  for (Eigen::Index i = 0; i < k; ++i) cur[static_cast<std::size_t>(i)] = i;
  if (k > n) return out;
  for (;;) {
    out.push_back(cur);
    Eigen::Index i = k - 1;
    while (i >= 0 && cur[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++cur[static_cast<std::size_t>(i)];
    for (Eigen::Index j = i + 1; j < k; ++j)
      cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

/// Pluecker coordinates of an arbitrary full-rank N x k matrix (not normalized).
inline CVec plucker_minors(const CMat& basis) {
  const auto subsets = lex_subsets(basis.rows(), basis.cols());
  CVec out(static_cast<Eigen::Index>(subsets.size()));
  CMat sub(basis.cols(), basis.cols());
  for (std::size_t a = 0; a < subsets.size(); ++a) {
    for (Eigen::Index i = 0; i < basis.cols(); ++i) sub.row(i) = basis.row(subsets[a][static_cast<std::size_t>(i)]);
    out(static_cast<Eigen::Index>(a)) = sub.determinant();
  }
  return out;
}

/// Unit-norm Pluecker vector of W in C^binom(N, k); defined up to a global phase.
inline CVec plucker(const Subspace& w) {
  CVec p = plucker_minors(w.basis());
  return p / p.norm();
}

// ---------------------------------------------------------------------------
// Schubert varieties S_T = {W : W cap T != 0}

struct SchubertDistance {
  double d_p;  // sin(alpha)
  double d_g;  // alpha
};

/// Distance from W to S_T in both metrics; both are governed by the minimum
/// angle alpha between W and T.
inline SchubertDistance schubert_distance(const Subspace& w, const Subspace& t) {
  const double alpha = min_angle(w, t);
  return {std::sin(alpha), alpha};
}

/// A closest point of S_T to W: the first principal vector w_1 of W is
/// replaced by its partner t_1 in T. Returns W itself when W already meets T.
inline Subspace nearest_schubert_point(const Subspace& w, const Subspace& t) {
  if (w.ambient_dim() != t.ambient_dim())
    throw DomainError("nearest_schubert_point: ambient dimension mismatch");
  if (min_angle(w, t) < 1e-12) return w;
  SvdResult d = svd(w.basis().adjoint() * t.basis());
  const CMat wp = w.basis() * d.left;   // principal vectors of W, first is closest to T
  const CVec t1 = t.basis() * d.right.col(0);
  CMat b(w.ambient_dim(), w.dim());
  b.leftCols(w.dim() - 1) = wp.rightCols(w.dim() - 1);
  b.col(w.dim() - 1) = t1;
  return Subspace::span_of(b);
}

// ---------------------------------------------------------------------------
// Tangent vectors and geodesics

/// Tangent vector at `base` in the block coordinates [[0, -R^*], [R, 0]]
/// relative to the orthonormal frame [base | completion]. The hermitian
/// metric is <R, S> = tr(R S^*).
struct GrassmannTangent {
  Subspace base;
  CMat completion;  // N x (N-k), orthonormal, orthogonal to base
  CMat coords;      // R, (N-k) x k

  double norm() const { return coords.norm(); }
  /// Velocity of the basis columns in C^N.
  CMat velocity() const { return completion * coords; }
};

inline GrassmannTangent make_tangent(const Subspace& base, const CMat& coords) {
  CMat c = complement_basis(base.basis());
  if (coords.rows() != c.cols() || coords.cols() != base.dim())
    throw DomainError("make_tangent: R must be (N-k) x k");
  return {base, std::move(c), coords};
}

/// Chart coordinates of a nearby subspace spanned by `other` (any basis):
/// R = (C^* Y)(U^* Y)^{-1}. The map is basis independent, and its derivative
/// along a curve through `base` gives the tangent coordinates in the frame.
inline CMat chart_coordinates(const Subspace& base, const CMat& completion, const CMat& other) {
  const CMat top = base.basis().adjoint() * other;
  Eigen::PartialPivLU<CMat> lu(top);
  if (std::abs(lu.determinant()) < 1e-300) throw NumericalFailure("chart_coordinates: outside chart");
  return (completion.adjoint() * other) * lu.inverse();
}

/// Point at parameter t on the geodesic through base with initial velocity v.
inline Subspace exp_map(const GrassmannTangent& v, double t) {
  const CMat delta = v.velocity();
  Eigen::JacobiSVD<CMat> d(delta, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVec s = d.singularValues();
  const Eigen::Index k = v.base.dim();
  RVec cs(k), sn(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    cs(i) = std::cos(t * s(i));
    sn(i) = std::sin(t * s(i));
  }
  const CMat& vv = d.matrixV();
  CMat y = v.base.basis() * vv * cs.asDiagonal() * vv.adjoint() +
           d.matrixU() * sn.asDiagonal() * vv.adjoint();
  return Subspace::span_of(y);
}

/// Point at parameter t in [0, 1] on a minimizing geodesic from V1 to V2.
/// Each principal vector pair is rotated by t * theta_j.
inline Subspace geodesic_step(const Subspace& v1, const Subspace& v2, double t) {
  require_same_point_type(v1, v2, "geodesic_step");
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("geodesic_step: t must lie in [0, 1]");
  SvdResult d = svd(v1.basis().adjoint() * v2.basis());
  const Eigen::Index k = v1.dim();
  const CMat y1 = v1.basis() * d.left.leftCols(k);
  const CMat y2 = v2.basis() * d.right;
  CMat out(v1.ambient_dim(), k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const double c = d.singular_values(j);
    const CVec dir = y2.col(j) - y1.col(j) * c;
    const double s = dir.norm();
    const double theta = std::atan2(s, c);
    if (theta > std::numbers::pi / 2 - 1e-10)
      throw DomainError("geodesic_step: principal angle pi/2, geodesic is not unique");
    if (s < 1e-15) {
      out.col(j) = y1.col(j);
    } else {
      out.col(j) = y1.col(j) * std::cos(t * theta) + dir / s * std::sin(t * theta);
    }
  }
  return Subspace::span_of(out);
}

}  // namespace intcond
