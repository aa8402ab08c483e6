#pragma once

// Intersection condition numbers.
//
// kappa_Z(L, z) is computed three ways: from the minimum angle between T_zZ
// and T_zL, from the normal-form matrix N, and as an inverse distance to the
// local Schubert variety. Kernel and image condition numbers are measured by
// central finite differences of the actual solution map.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "intcond/grassmann.hpp"
#include "intcond/intersect.hpp"
#include "intcond/variety.hpp"

namespace intcond {

struct ConditionOptions {
  VarietyTolerances variety{};
  double angle_tol = 1e-10;     // at or below: nontransversal, kappa = +inf
  double subspace_tol = 1e-8;   // z in L residual
  double cluster_tol = 1e-6;
};

namespace detail {

inline void require_incidence(const Variety& z_var, const Subspace& l, const ProjPoint& z, const ConditionOptions& opt) {
  if (z.size() != z_var.ambient_dim() || l.ambient_dim() != z_var.ambient_dim())
    throw DomainError("condition: dimension mismatch between Z, L and z");
  if (l.dim() != z_var.codim() + 1)
    throw DomainError("condition: L must have complementary dimension (linear dim codim Z + 1)");
  require_on_variety(z_var, z, opt.variety.residual);
  const double r = l.relative_residual(z.coords());
  if (r > opt.subspace_tol) throw DomainError("condition: z is not in L (residual " + std::to_string(r) + ")");
}

}  // namespace detail

/// kappa_Z(L, z) = 1 / sin(alpha), alpha the minimum angle between T_zZ and T_zL.
inline double kappa_point(const Variety& z_var, const Subspace& l, const ProjPoint& z, const ConditionOptions& opt = {}) {
  detail::require_incidence(z_var, l, z, opt);
  const Transversality t = transversality(z_var, l, z, opt.angle_tol, opt.variety);
  if (t.singular || !t.transversal) return kInf;
  return 1.0 / std::sin(t.angle);
}

/// kappa_Z(L, z) = sqrt(1 + ||N||^2).
inline double kappa_point_via_n(const Variety& z_var, const Subspace& l, const ProjPoint& z, const ConditionOptions& opt = {}) {
  detail::require_incidence(z_var, l, z, opt);
  try {
    const double nn = spectral_norm(n_matrix(z_var, l, z, opt.variety));
    return std::sqrt(1.0 + nn * nn);
  } catch (const IllPosedError&) {
    return kInf;
  }
}

struct CntResult {
  double kappa = kInf;
  double d_g = 0.0;  // geodesic distance of L to Sigma_z(Z)
  double d_p = 0.0;  // projection distance of L to Sigma_z(Z)
  std::optional<Subspace> nearest_ill_posed;  // a closest L' in Sigma_z(Z)
};

/// Condition number theorem route: distance from T_zL to the Schubert
/// variety of T_zZ inside z^perp, realized by an explicit nearest point.
inline CntResult kappa_point_via_cnt(const Variety& z_var, const Subspace& l, const ProjPoint& z, const ConditionOptions& opt = {}) {
  detail::require_incidence(z_var, l, z, opt);
  CntResult out;
  if (!is_smooth(z_var, z, opt.variety)) {
    out.nearest_ill_posed = l;
    return out;
  }
  const Subspace tz = tangent_space(z_var, z, opt.variety);
  const Subspace tl = tangent_space_of_subspace(l, z);
  const Subspace nearest = nearest_schubert_point(tl, tz);
  out.d_g = geodesic_distance(tl, nearest);
  out.d_p = projector_distance(tl, nearest);
  CMat lb(l.ambient_dim(), nearest.dim() + 1);
  lb.col(0) = z.coords();
  lb.rightCols(nearest.dim()) = nearest.basis();
  out.nearest_ill_posed = Subspace::span_of(lb);
  out.kappa = out.d_g <= opt.angle_tol ? kInf : 1.0 / std::sin(out.d_g);
  return out;
}

// ---------------------------------------------------------------------------
// Global condition number

struct PointCondition {
  ProjPoint point;
  int multiplicity = 1;
  double kappa_angle = kInf;
  double kappa_nmatrix = kInf;
  double kappa_cnt = kInf;
  double min_angle = 0.0;
  double dist_g_local_schubert = 0.0;
  double dist_p_local_schubert = 0.0;
  bool transversal = false;
  bool singular = false;
};

struct ConditionReport {
  std::vector<PointCondition> per_point;
  double kappa_global = kInf;
  IllPosedReason ill_posed_reason = IllPosedReason::none;
  bool multiplicity_ambiguous = false;
};

/// Z cap L using the solver that matches the shapes of Z and L.
inline IntersectionSet intersect(const Variety& z_var, const Subspace& l, const IntersectOptions& opt = {}) {
  if (z_var.kind() == VarietyKind::hypersurface && l.dim() == 2) return line_hypersurface(z_var, l, opt);
  if (z_var.kind() == VarietyKind::param_curve && l.dim() == z_var.n()) return hyperplane_curve(z_var, l, opt);
  throw CapabilityError("no global solver for this (Z, L) shape; supply a witness set");
}

namespace detail {

inline IntersectOptions to_intersect_options(const ConditionOptions& opt) {
  return {opt.variety, opt.angle_tol, opt.cluster_tol};
}

inline ConditionReport report_from_points(const Variety& z_var, const Subspace& l, const IntersectionSet& w,
                                          const ConditionOptions& opt, bool all_methods) {
  ConditionReport rep;
  rep.multiplicity_ambiguous = w.multiplicity_ambiguous;
  double worst = 1.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    PointCondition pc;
    pc.point = w.points[i];
    pc.multiplicity = w.multiplicities.empty() ? 1 : w.multiplicities[i];
    const Transversality t = transversality(z_var, l, pc.point, opt.angle_tol, opt.variety);
    pc.singular = t.singular;
    pc.min_angle = t.angle;
    pc.transversal = !t.singular && t.transversal && pc.multiplicity == 1;
    if (pc.transversal) {
      pc.kappa_angle = 1.0 / std::sin(t.angle);
      if (all_methods) {
        pc.kappa_nmatrix = kappa_point_via_n(z_var, l, pc.point, opt);
        const CntResult c = kappa_point_via_cnt(z_var, l, pc.point, opt);
        pc.kappa_cnt = c.kappa;
        pc.dist_g_local_schubert = c.d_g;
        pc.dist_p_local_schubert = c.d_p;
      } else {
        pc.kappa_nmatrix = pc.kappa_cnt = pc.kappa_angle;
        pc.dist_g_local_schubert = t.angle;
        pc.dist_p_local_schubert = std::sin(t.angle);
      }
    }
    if (pc.singular) {
      if (rep.ill_posed_reason == IllPosedReason::none) rep.ill_posed_reason = IllPosedReason::singular_point;
      worst = kInf;
    } else if (!pc.transversal) {
      if (rep.ill_posed_reason == IllPosedReason::none) rep.ill_posed_reason = IllPosedReason::nontransversal;
      worst = kInf;
    } else {
      worst = std::max(worst, pc.kappa_angle);
    }
    rep.per_point.push_back(std::move(pc));
  }
  rep.kappa_global = w.size() ? worst : kInf;
  return rep;
}

}  // namespace detail

/// kappa_Z(L) = max over z in Z cap L of kappa_Z(L, z), with the reason
/// when L is ill-posed. `all_methods` also fills the N-matrix and Schubert
/// distance columns.
inline ConditionReport kappa_global(const Variety& z_var, const Subspace& l, const ConditionOptions& opt = {},
                                    bool all_methods = true) {
  if (l.ambient_dim() != z_var.ambient_dim() || l.dim() != z_var.codim() + 1)
    throw DomainError("kappa_global: L must have complementary dimension in the ambient space of Z");
  IntersectionSet w;
  try {
    w = intersect(z_var, l, detail::to_intersect_options(opt));
  } catch (const IllPosedError& e) {
    ConditionReport rep;
    rep.ill_posed_reason = e.reason();
    return rep;
  }
  return detail::report_from_points(z_var, l, w, opt, all_methods);
}

/// kappa_global over a caller-supplied witness set (any variety kind).
inline ConditionReport kappa_global(const Variety& z_var, const Subspace& l, const std::vector<ProjPoint>& witness,
                                    const ConditionOptions& opt = {}, bool all_methods = true) {
  IntersectionSet w;
  for (const auto& p : witness) {
    detail::require_incidence(z_var, l, p, opt);
    w.points.push_back(p);
    w.multiplicities.push_back(1);
  }
  return detail::report_from_points(z_var, l, w, opt, all_methods);
}

/// Fast path for sampling: only the angle route, no report.
inline double kappa_global_value(const Variety& z_var, const Subspace& l, const ConditionOptions& opt = {}) {
  return kappa_global(z_var, l, opt, false).kappa_global;
}

// ---------------------------------------------------------------------------
// Finite-difference condition numbers

struct FdCondition {
  double value = kInf;                 // ||M|| * ||D G|| for the matrix M representing L
  double value_half_step = kInf;       // same with h / 2
  double richardson_rel_diff = 0.0;
  bool richardson_ok = true;           // h and h/2 agree to 1e-3
  double holomorphy_residual = 0.0;    // max ||D(iE) - i D(E)|| / max ||D(E)||
  bool holomorphic_ok = true;          // residual <= 1e-6
};

namespace detail {

// Affine chart at unit z: w -> w / <w, z>. Its derivative at z is the identity
// on z^perp, which is the Fubini-Study isometry with T_zP^n.
inline CVec chart_at(const CVec& z, const CVec& w) { return w / z.dot(w); }

struct FdNorm {
  double norm;
  double holomorphy;
};

// Spectral norm of the real-linear map Mdot -> D(Mdot) assembled from central
// differences over the 2 * rows * cols real coordinate directions.
template <class Solve>
FdNorm fd_operator_norm(const CMat& base, const CVec& z, double h, Solve&& solve) {
  const CMat frame = complement_basis(z);  // orthonormal basis of z^perp
  const Eigen::Index n = frame.cols();
  const Eigen::Index dirs = 2 * base.rows() * base.cols();
  Eigen::MatrixXd jr(2 * n, dirs);
  double max_col = 0.0;
  double max_hol = 0.0;
  Eigen::Index col = 0;
  for (Eigen::Index j = 0; j < base.cols(); ++j) {
    for (Eigen::Index i = 0; i < base.rows(); ++i) {
      CVec d[2];
      for (int part = 0; part < 2; ++part) {
        CMat e = CMat::Zero(base.rows(), base.cols());
        e(i, j) = part == 0 ? cplx(1.0, 0.0) : cplx(0.0, 1.0);
        const CVec zp = solve(CMat(base + h * e));
        const CVec zm = solve(CMat(base - h * e));
        d[part] = frame.adjoint() * ((chart_at(z, zp) - chart_at(z, zm)) / (2.0 * h));
        jr.col(col).head(n) = d[part].real();
        jr.col(col).tail(n) = d[part].imag();
        ++col;
        max_col = std::max(max_col, d[part].norm());
      }
      max_hol = std::max(max_hol, (d[1] - cplx(0.0, 1.0) * d[0]).norm());
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> sv(jr);
  return {sv.singularValues()(0), max_col > 0 ? max_hol / max_col : 0.0};
}

inline void check_step(double h) {
  if (!(h >= 1e-7 && h <= 1e-4)) throw DomainError("finite-difference step must lie in [1e-7, 1e-4]");
}

template <class Solve>
FdCondition fd_condition(const CMat& m_unit, const CVec& z, double h, Solve&& solve) {
  FdCondition out;
  const FdNorm a = fd_operator_norm(m_unit, z, h, solve);
  const FdNorm b = fd_operator_norm(m_unit, z, h / 2, solve);
  out.value = a.norm;  // ||m_unit|| = 1
  out.value_half_step = b.norm;
  out.richardson_rel_diff = std::abs(a.norm - b.norm) / std::max(a.norm, b.norm);
  out.richardson_ok = out.richardson_rel_diff <= 1e-3;
  out.holomorphy_residual = std::max(a.holomorphy, b.holomorphy);
  out.holomorphic_ok = out.holomorphy_residual <= 1e-6;
  return out;
}

inline CVec solve_kernel(const Variety& z_var, const CMat& a, const ProjPoint& z) {
  const NewtonResult r = newton_refine(z_var, a, z, 30);
  if (!r.converged) throw NumericalFailure("finite differences: Newton failed on a perturbed problem");
  return r.point.coords();
}

}  // namespace detail

/// Kernel intersection condition number ||A|| * ||D_A G|| by central
/// differences. A is rescaled to unit spectral norm first (the quantity is
/// scale invariant), so h is a step relative to ||A||.
inline FdCondition kercond_fd(const Variety& z_var, const CMat& a, const ProjPoint& z, double h = 1e-5,
                              const ConditionOptions& opt = {}) {
  detail::check_step(h);
  if (a.rows() != z_var.dim() || a.cols() != z_var.ambient_dim())
    throw DomainError("kercond_fd: A must be (dim Z) x (n+1)");
  const Subspace l = Subspace::kernel_of(a);
  detail::require_incidence(z_var, l, z, opt);
  if (!std::isfinite(kappa_point(z_var, l, z, opt))) return {};
  const CMat a_unit = a / spectral_norm(a);
  const ProjPoint z0 = newton_refine(z_var, a_unit, z, 30).point;
  return detail::fd_condition(a_unit, z0.coords(), h,
                              [&](const CMat& at) { return detail::solve_kernel(z_var, at, z0); });
}

/// Image intersection condition number ||B|| * ||D_B Gamma||, L = im B.
inline FdCondition imcond_fd(const Variety& z_var, const CMat& b, const ProjPoint& z, double h = 1e-5,
                             const ConditionOptions& opt = {}) {
  detail::check_step(h);
  if (b.rows() != z_var.ambient_dim() || b.cols() != z_var.codim() + 1)
    throw DomainError("imcond_fd: B must be (n+1) x (codim Z + 1)");
  const Subspace l = Subspace::span_of(b);
  detail::require_incidence(z_var, l, z, opt);
  if (!std::isfinite(kappa_point(z_var, l, z, opt))) return {};
  const CMat b_unit = b / spectral_norm(b);
  const ProjPoint z0 = newton_refine(z_var, l.kernel_matrix(), z, 30).point;
  return detail::fd_condition(b_unit, z0.coords(), h, [&](const CMat& bt) {
    return detail::solve_kernel(z_var, Subspace::span_of(bt).kernel_matrix(), z0);
  });
}

// ---------------------------------------------------------------------------
// Derivatives of B -> im B and A -> ker A

struct GrassmannMapNorms {
  double im_norm = 0.0;      // ||D_B im|| from the assembled derivative
  double ker_norm = 0.0;     // ||D_A ker||, A = B^T
  double im_norm_dg = 0.0;   // d_g(im B, im(B + h E*)) / h along the maximizing direction
  double ker_norm_dg = 0.0;
};

namespace detail {

template <class Image>
std::pair<double, double> grassmann_fd_norm(const CMat& base, const Subspace& w0, double h, Image&& image) {
  const CMat comp = complement_basis(w0.basis());
  const Eigen::Index rc = comp.cols() * w0.dim();
  const Eigen::Index dirs = 2 * base.rows() * base.cols();
  Eigen::MatrixXd jr(2 * rc, dirs);
  std::vector<CMat> directions;
  Eigen::Index col = 0;
  for (Eigen::Index j = 0; j < base.cols(); ++j)
    for (Eigen::Index i = 0; i < base.rows(); ++i)
      for (int part = 0; part < 2; ++part) {
        CMat e = CMat::Zero(base.rows(), base.cols());
        e(i, j) = part == 0 ? cplx(1.0, 0.0) : cplx(0.0, 1.0);
        const CMat rp = chart_coordinates(w0, comp, image(CMat(base + h * e)));
        const CMat rm = chart_coordinates(w0, comp, image(CMat(base - h * e)));
        const CMat d = (rp - rm) / (2.0 * h);
        const Eigen::Map<const CVec> flat(d.data(), d.size());
        jr.col(col).head(rc) = flat.real();
        jr.col(col).tail(rc) = flat.imag();
        directions.push_back(e);
        ++col;
      }
  Eigen::JacobiSVD<Eigen::MatrixXd> sv(jr, Eigen::ComputeThinV);
  const double norm = sv.singularValues()(0);
  CMat best = CMat::Zero(base.rows(), base.cols());
  for (Eigen::Index k = 0; k < dirs; ++k) best += sv.matrixV()(k, 0) * directions[static_cast<std::size_t>(k)];
  const Subspace moved = Subspace::span_of(image(CMat(base + h * best)));
  return {norm, geodesic_distance(w0, moved) / h};
}

}  // namespace detail

/// Operator norms of B -> im B and B^T -> ker B^T as maps into Grassmannians,
/// measured by finite differences in tangent-chart coordinates.
inline GrassmannMapNorms grassmann_map_norms_fd(const CMat& b, double h = 1e-6) {
  if (b.cols() >= b.rows()) throw DomainError("grassmann_map_norms_fd: B must be tall");
  if (numerical_rank(b, 1e-10) < b.cols()) throw DomainError("grassmann_map_norms_fd: B is rank deficient");
  GrassmannMapNorms out;
  const Subspace im0 = Subspace::span_of(b);
  std::tie(out.im_norm, out.im_norm_dg) =
      detail::grassmann_fd_norm(b, im0, h, [](const CMat& x) -> CMat { return x; });
  const CMat a = b.transpose();
  const Subspace ker0 = Subspace::kernel_of(a);
  std::tie(out.ker_norm, out.ker_norm_dg) = detail::grassmann_fd_norm(
      a, ker0, h, [](const CMat& x) -> CMat { return Subspace::kernel_of(x).basis(); });
  return out;
}

}  // namespace intcond
