#pragma once

// Dense complex linear algebra shared by every other header: SVD, pseudoinverse,
// orthonormal bases and the Fubini-Study inner product on T_z P^n.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include "intcond/errors.hpp"

namespace intcond {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

inline constexpr double kMachineEps = std::numeric_limits<double>::epsilon();
inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct SvdResult {
  CMat left;               // m x m, unitary
  RVec singular_values;    // min(m, n) entries, nonincreasing
  CMat right;              // n x n, unitary
};

inline bool all_finite(const CMat& m) {
  return m.allFinite();
}

inline void require_finite(const CMat& m, const char* who) {
  if (m.size() == 0) throw DomainError(std::string(who) + ": empty matrix");
  if (!all_finite(m)) throw DomainError(std::string(who) + ": matrix has non-finite entries");
}

/// Full SVD, M = U diag(s) V^*. Backed by one-sided Jacobi (Eigen::JacobiSVD),
/// which always terminates; the result is still checked so that a corrupted
/// decomposition surfaces as NumericalFailure instead of garbage.
inline SvdResult svd(const CMat& m) {
  require_finite(m, "svd");
  Eigen::JacobiSVD<CMat> dec(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (dec.info() != Eigen::Success) throw NumericalFailure("svd: decomposition did not converge");
  SvdResult r{dec.matrixU(), dec.singularValues(), dec.matrixV()};
  if (!r.left.allFinite() || !r.right.allFinite() || !r.singular_values.allFinite())
    throw NumericalFailure("svd: non-finite factors");
  return r;
}

/// Singular values only (cheaper; no factors).
inline RVec singular_values(const CMat& m) {
  require_finite(m, "singular_values");
  Eigen::JacobiSVD<CMat> dec(m);
  return dec.singularValues();
}

inline double spectral_norm(const CMat& m) {
  RVec s = singular_values(m);
  return s.size() ? s(0) : 0.0;
}

/// Relative rank cutoff used when the caller passes a negative rank_tol.
inline double default_rank_tol(const CMat& m) {
  return static_cast<double>(std::max(m.rows(), m.cols())) * kMachineEps;
}

/// Number of singular values above rank_tol * sigma_1.
inline Eigen::Index numerical_rank(const CMat& m, double rank_tol = -1.0) {
  if (rank_tol < 0) rank_tol = default_rank_tol(m);
  RVec s = singular_values(m);
  if (s.size() == 0 || s(0) == 0.0) return 0;
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > rank_tol * s(0)) ++r;
  return r;
}

/// Moore-Penrose inverse. Singular values at or below rank_tol * sigma_1 are
/// treated as zero; a negative rank_tol selects max(rows, cols) * eps.
inline CMat pinv(const CMat& m, double rank_tol = -1.0) {
  if (rank_tol < 0) rank_tol = default_rank_tol(m);
  SvdResult d = svd(m);
  CMat out = CMat::Zero(m.cols(), m.rows());
  if (d.singular_values.size() == 0 || d.singular_values(0) == 0.0) return out;
  const double cut = rank_tol * d.singular_values(0);
  for (Eigen::Index i = 0; i < d.singular_values.size(); ++i) {
    const double s = d.singular_values(i);
    if (s <= cut) break;
    out.noalias() += (d.right.col(i) / s) * d.left.col(i).adjoint();
  }
  return out;
}

/// kappa(M) = ||M|| * ||M^+||: sigma_max / sigma_min over the min(rows, cols)
/// singular values, +inf when M is rank deficient at the default tolerance.
inline double matrix_condition(const CMat& m, double rank_tol = -1.0) {
  if (rank_tol < 0) rank_tol = default_rank_tol(m);
  RVec s = singular_values(m);
  if (s.size() == 0 || s(0) == 0.0) throw DomainError("matrix_condition: zero matrix");
  const double smin = s(s.size() - 1);
  if (smin <= rank_tol * s(0)) return kInf;
  return s(0) / smin;
}

/// Orthonormal basis of the column span of M (thin Householder QR). M must
/// have full column rank.
inline CMat orthonormalize(const CMat& m, double rank_tol = -1.0) {
  require_finite(m, "orthonormalize");
  if (rank_tol < 0) rank_tol = std::max(default_rank_tol(m), 1e-12);
  const Eigen::Index r = numerical_rank(m, rank_tol);
  if (r < m.cols())
    throw DomainError("orthonormalize: input has numerical rank " + std::to_string(r) + " < " +
                      std::to_string(m.cols()) + " columns");
  Eigen::HouseholderQR<CMat> qr(m);
  CMat q = qr.householderQ() * CMat::Identity(m.rows(), m.cols());
  // One reorthogonalization pass keeps Q^*Q = I at roundoff level.
  Eigen::HouseholderQR<CMat> qr2(q);
  CMat q2 = qr2.householderQ() * CMat::Identity(m.rows(), m.cols());
  // Gram-Schmidt phase convention: <q_j, m_j> real and positive.
  for (Eigen::Index j = 0; j < q2.cols(); ++j) {
    const cplx d = q2.col(j).dot(m.col(j));
    if (std::abs(d) > 0) q2.col(j) *= d / std::abs(d);
  }
  return q2;
}

/// Columns spanning the orthogonal complement of span(basis) in C^rows. The
/// result is a deterministic function of the input.
inline CMat complement_basis(const CMat& basis) {
  const Eigen::Index n = basis.rows();
  const Eigen::Index k = basis.cols();
  if (k == 0) return CMat::Identity(n, n);
  Eigen::HouseholderQR<CMat> qr(basis);
  CMat full = qr.householderQ() * CMat::Identity(n, n);
  return full.rightCols(n - k);
}

/// Right null space of M: an orthonormal basis of {x : Mx = 0}, computed from
/// the trailing right singular vectors.
inline CMat null_space(const CMat& m, double rank_tol = -1.0) {
  const Eigen::Index r = numerical_rank(m, rank_tol);
  SvdResult d = svd(m);
  return d.right.rightCols(m.cols() - r);
}

/// Hermitian inner product <u, v> = sum_j u_j conj(v_j).
inline cplx hermitian_inner(const CVec& u, const CVec& v) {
  return v.dot(u);  // Eigen conjugates the left operand
}

/// Fubini-Study inner product on T_z P^n: <u, v>_z = <u, v> / ||z||^2.
/// u and v must be tangent, i.e. orthogonal to z.
inline cplx fubini_study_inner(const CVec& z, const CVec& u, const CVec& v) {
  if (z.size() != u.size() || z.size() != v.size())
    throw DomainError("fubini_study_inner: dimension mismatch");
  const double nz = z.norm();
  if (nz == 0.0) throw DomainError("fubini_study_inner: z = 0");
  const auto tangent = [&](const CVec& w) {
    return std::abs(hermitian_inner(w, z)) <= 1e-8 * std::max(1.0, w.norm()) * nz;
  };
  if (!tangent(u) || !tangent(v))
    throw DomainError("fubini_study_inner: vector not orthogonal to z");
  return hermitian_inner(u, v) / (nz * nz);
}

/// Chordal distance sin(angle) between the complex lines C u and C v.
inline double chordal_distance(const CVec& u, const CVec& v) {
  const CVec a = u / u.norm();
  const CVec b = v / v.norm();
  return (b - a * a.dot(b)).norm();
}

}  // namespace intcond
