#pragma once

// Z cap L for lines against hypersurfaces and hyperplanes against
// parametrized curves, a Newton corrector for the square system
// {f = 0, A z = 0}, and witness-set tracking along paths of subspaces.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "intcond/binary_form.hpp"
#include "intcond/grassmann.hpp"
#include "intcond/variety.hpp"

namespace intcond {

struct IntersectionSet {
  std::vector<ProjPoint> points;
  std::vector<int> multiplicities;
  std::vector<double> residuals;
  std::vector<bool> transversal;
  std::vector<bool> singular;
  bool multiplicity_ambiguous = false;
  std::vector<double> path_max_kappa;  // filled by track_witness

  std::size_t size() const { return points.size(); }
  int total_multiplicity() const {
    int s = 0;
    for (int m : multiplicities) s += m;
    return s;
  }
};

struct Transversality {
  bool transversal = false;
  bool singular = false;
  double angle = 0.0;  // min angle between T_zZ and T_zL (0 when singular)
};

struct IntersectOptions {
  VarietyTolerances variety{};
  double angle_tol = 1e-10;
  double cluster_tol = 1e-6;
};

/// Minimum angle between T_zZ and T_zL, or a singular flag.
inline Transversality transversality(const Variety& z_var, const Subspace& l, const ProjPoint& z,
                                     double angle_tol = 1e-10, const VarietyTolerances& tol = {}) {
  Transversality out;
  if (!is_smooth(z_var, z, tol)) {
    out.singular = true;
    return out;
  }
  const Subspace tz = tangent_space(z_var, z, tol);
  const Subspace tl = tangent_space_of_subspace(l, z);
  out.angle = min_angle(tz, tl);
  out.transversal = out.angle > angle_tol;
  return out;
}

/// T_zZ + T_zL = T_zP^n, i.e. the minimum angle exceeds tol.
inline bool is_transversal(const Variety& z_var, const Subspace& l, const ProjPoint& z, double tol = 1e-10) {
  return transversality(z_var, l, z, tol).transversal;
}

namespace detail {

inline void fill_flags(const Variety& z_var, const Subspace& l, IntersectionSet& out, const IntersectOptions& opt) {
  for (std::size_t i = 0; i < out.points.size(); ++i) {
    const auto t = transversality(z_var, l, out.points[i], opt.angle_tol, opt.variety);
    out.singular.push_back(t.singular);
    out.transversal.push_back(t.transversal && out.multiplicities[i] == 1);
  }
}

}  // namespace detail

/// Z cap L for a hypersurface Z and a projective line L (dim L-hat = 2).
inline IntersectionSet line_hypersurface(const Variety& z_var, const Subspace& l, const IntersectOptions& opt = {}) {
  if (z_var.kind() != VarietyKind::hypersurface) throw CapabilityError("line_hypersurface: Z is not a hypersurface");
  if (l.dim() != 2 || l.ambient_dim() != z_var.ambient_dim())
    throw DomainError("line_hypersurface: L must be a line in the ambient space of Z");
  const HomogeneousPoly& f = z_var.equations().front();
  const CVec b1 = l.basis().col(0);
  const CVec b2 = l.basis().col(1);
  const BinaryForm g = f.restrict_to_line(b1, b2);
  if (!std::isfinite(g.max_abs()) || !std::isfinite(f.coefficient_norm()))
    throw NumericalFailure("line_hypersurface: restricted form overflows double range");
  if (g.max_abs() <= 1e-12 * f.coefficient_norm())
    throw IllPosedError(IllPosedReason::positive_dimensional, "line_hypersurface: L is contained in Z");
  const BinaryRoots roots = binary_roots(g, opt.cluster_tol);
  IntersectionSet out;
  out.multiplicity_ambiguous = roots.multiplicity_ambiguous;
  for (const auto& r : roots.roots) {
    ProjPoint p(CVec(r.u * b1 + r.v * b2));
    out.points.push_back(p);
    out.multiplicities.push_back(r.multiplicity);
    out.residuals.push_back(z_var.equation_residual(p));
  }
  detail::fill_flags(z_var, l, out, opt);
  return out;
}

inline IntersectionSet line_hypersurface(const HomogeneousPoly& f, const Subspace& l, const IntersectOptions& opt = {}) {
  return line_hypersurface(Variety::hypersurface(f), l, opt);
}

/// Z cap H for a parametrized curve Z and a hyperplane H (dim H-hat = n).
inline IntersectionSet hyperplane_curve(const Variety& c, const Subspace& h, const IntersectOptions& opt = {}) {
  if (c.kind() != VarietyKind::param_curve) throw CapabilityError("hyperplane_curve: Z is not a parametrized curve");
  if (h.dim() != c.n() || h.ambient_dim() != c.ambient_dim())
    throw DomainError("hyperplane_curve: H must be a hyperplane in the ambient space of Z");
  const CVec normal = complement_basis(h.basis()).col(0);  // H = {x : <x, normal> = 0}
  const auto& comps = c.components();
  BinaryForm g;
  g.coeffs.assign(static_cast<std::size_t>(c.degree() + 1), cplx{});
  double scale = 0.0;
  for (int i = 0; i <= c.n(); ++i) {
    g += std::conj(normal(i)) * comps[static_cast<std::size_t>(i)].as_binary_form();
    scale = std::max(scale, comps[static_cast<std::size_t>(i)].coefficient_norm());
  }
  if (!std::isfinite(g.max_abs()) || !std::isfinite(scale))
    throw NumericalFailure("hyperplane_curve: restricted form overflows double range");
  if (g.max_abs() <= 1e-12 * scale)
    throw IllPosedError(IllPosedReason::positive_dimensional, "hyperplane_curve: curve lies in H");
  const BinaryRoots roots = binary_roots(g, opt.cluster_tol);
  IntersectionSet out;
  out.multiplicity_ambiguous = roots.multiplicity_ambiguous;
  for (const auto& r : roots.roots) {
    CVec par(2);
    par << r.u, r.v;
    ProjPoint p(c.curve_point(par));
    out.points.push_back(p);
    out.multiplicities.push_back(r.multiplicity);
    out.residuals.push_back(std::abs(p.coords().dot(normal)));
  }
  detail::fill_flags(c, h, out, opt);
  return out;
}

// ---------------------------------------------------------------------------
// Newton corrector

struct NewtonResult {
  ProjPoint point;
  int iterations = 0;
  bool converged = false;
  double residual = 0.0;
  std::vector<double> step_sizes;  // relative Newton step norms
};

/// Residual of z for the system {Z, ker A}: max of the equation residual and
/// ||A z|| for orthonormal-row A.
inline double system_residual(const Variety& z_var, const CMat& a_orth, const ProjPoint& z) {
  double r = (a_orth * z.coords()).norm();
  if (z_var.is_equational()) r = std::max(r, z_var.equation_residual(z));
  return r;
}

/// Orthonormal rows with the same kernel as A.
inline CMat orthonormal_rows(const CMat& a) { return orthonormalize(a.adjoint()).adjoint(); }

/// Newton's method for {f_1..f_s = 0, A z = 0} in the affine chart
/// <z, z0> = 1 (for curves: {A phi(p) = 0} in the chart <p, p0> = 1).
/// A singular Newton matrix means the intersection is not transversal.
inline NewtonResult newton_refine(const Variety& z_var, const CMat& a, const ProjPoint& z0, int max_iter = 20) {
  if (a.cols() != z_var.ambient_dim()) throw DomainError("newton_refine: A has wrong number of columns");
  if (a.rows() != z_var.dim()) throw DomainError("newton_refine: A must have dim Z rows");
  const CMat q = orthonormal_rows(a);
  NewtonResult res;
  constexpr double kStop = 1e-15;
  constexpr double kSingular = 1e12;

  auto check_cond = [&](const CMat& jac) {
    if (!(matrix_condition(jac) <= kSingular))
      throw IllPosedError(IllPosedReason::nontransversal, "newton_refine: singular Newton matrix (nontransversal)");
  };

  if (z_var.is_equational()) {
    const auto& fs = z_var.equations();
    const auto s = static_cast<Eigen::Index>(fs.size());
    const Eigen::Index n1 = z_var.ambient_dim();
    const CVec anchor = z0.coords();
    CVec z = anchor;
    std::vector<double> scale(fs.size());
    for (std::size_t i = 0; i < fs.size(); ++i) scale[i] = 1.0 / fs[i].coefficient_norm();
    for (;;) {
      CVec rhs(n1);
      CMat jac(n1, n1);
      for (Eigen::Index i = 0; i < s; ++i) {
        const auto& f = fs[static_cast<std::size_t>(i)];
        rhs(i) = f(z) * scale[static_cast<std::size_t>(i)];
        jac.row(i) = f.gradient(z).transpose() * scale[static_cast<std::size_t>(i)];
      }
      rhs.segment(s, q.rows()) = q * z;
      jac.middleRows(s, q.rows()) = q;
      rhs(n1 - 1) = anchor.dot(z) - 1.0;
      jac.row(n1 - 1) = anchor.adjoint();
      check_cond(jac);  // also at an exact start: a tangent root is rejected
      res.residual = system_residual(z_var, q, ProjPoint(z));
      if (res.residual <= kStop || res.iterations >= max_iter) break;
      const CVec step = jac.fullPivLu().solve(rhs);
      z -= step;
      ++res.iterations;
      res.step_sizes.push_back(step.norm() / z.norm());
      if (res.step_sizes.back() <= kStop) {
        res.residual = system_residual(z_var, q, ProjPoint(z));
        break;
      }
    }
    res.point = ProjPoint(z);
  } else {
    const auto pre = curve_preimages(z_var, z0, 1e-3);
    if (pre.empty()) throw DomainError("newton_refine: start point is not on the curve");
    const CVec anchor = pre.front().param;
    CVec p = anchor;
    for (;;) {
      const CVec img = z_var.curve_point(p);
      const double ni = img.norm();
      CMat jac(2, 2);
      CVec rhs(2);
      rhs(0) = (q * img)(0) / ni;
      jac.row(0) = (q * z_var.curve_derivative(p)) / ni;
      rhs(1) = anchor.dot(p) - 1.0;
      jac.row(1) = anchor.adjoint();
      check_cond(jac);
      res.residual = system_residual(z_var, q, ProjPoint(img));
      if (res.residual <= kStop || res.iterations >= max_iter) break;
      const CVec step = jac.fullPivLu().solve(rhs);
      p -= step;
      ++res.iterations;
      res.step_sizes.push_back(step.norm() / p.norm());
      if (res.step_sizes.back() <= kStop) {
        res.residual = system_residual(z_var, q, ProjPoint(z_var.curve_point(p)));
        break;
      }
    }
    res.point = ProjPoint(z_var.curve_point(p));
  }
  res.converged = res.residual <= 1e-12;
  return res;
}

// ---------------------------------------------------------------------------
// Witness tracking

/// Piecewise-linear path of kernel matrices through the given waypoints,
/// t in [0, 1]; rows are re-orthonormalized at every evaluation.
struct SubspacePath {
  std::vector<CMat> waypoints;

  CMat at(double t) const {
    if (waypoints.size() < 2) throw DomainError("SubspacePath: need at least two waypoints");
    t = std::clamp(t, 0.0, 1.0);
    const double segs = static_cast<double>(waypoints.size() - 1);
    auto j = static_cast<std::size_t>(std::floor(t * segs));
    if (j >= waypoints.size() - 1) j = waypoints.size() - 2;
    const double s = t * segs - static_cast<double>(j);
    return orthonormal_rows((1.0 - s) * waypoints[j] + s * waypoints[j + 1]);
  }
  Subspace subspace_at(double t) const { return Subspace::kernel_of(at(t)); }
};

/// Pointwise condition 1/sin(angle(T_zZ, T_zL)), +inf when ill-posed.
inline double local_kappa(const Variety& z_var, const Subspace& l, const ProjPoint& z) {
  try {
    const auto t = transversality(z_var, l, z);
    if (t.singular || !t.transversal) return kInf;
    return 1.0 / std::sin(t.angle);
  } catch (const Error&) {
    return kInf;
  }
}

struct TrackOptions {
  int newton_max_iter = 6;
  double min_step = 1e-10;
  double max_jump = 0.25;  // accepted displacement, in units of 1/kappa
};

/// Continue each start point along the path. Each grid step reuses the
/// previous point as predictor and corrects with Newton; a failed correction
/// halves the step. Throws PathFailure when the step drops below min_step.
inline IntersectionSet track_witness(const Variety& z_var, const SubspacePath& path, const IntersectionSet& start,
                                     int steps, const TrackOptions& opt = {}) {
  if (steps < 1) throw DomainError("track_witness: steps must be >= 1");
  for (std::size_t i = 0; i < start.size(); ++i)
    if (!start.transversal.empty() && !start.transversal[i])
      throw DomainError("track_witness: start point " + std::to_string(i) + " is not transversal");
  const double base = 1.0 / steps;
  IntersectionSet out;
  for (const ProjPoint& p0 : start.points) {
    ProjPoint z = newton_refine(z_var, path.at(0.0), p0, 20).point;
    double t = 0.0;
    double h = base;
    double max_kappa = local_kappa(z_var, path.subspace_at(0.0), z);
    while (t < 1.0) {
      const double tn = std::min(1.0, t + h);
      bool ok = false;
      NewtonResult r;
      double kappa_new = kInf;
      try {
        r = newton_refine(z_var, path.at(tn), z, opt.newton_max_iter);
        ok = r.converged;
        if (ok && r.step_sizes.size() >= 2) ok = r.step_sizes[1] <= 0.5 * r.step_sizes[0];
        if (ok) {
          kappa_new = local_kappa(z_var, path.subspace_at(tn), r.point);
          ok = std::isfinite(kappa_new) && chordal_distance(z.coords(), r.point.coords()) <= opt.max_jump / kappa_new;
        }
      } catch (const IllPosedError&) {
        ok = false;
      }
      if (ok) {
        z = r.point;
        t = tn;
        max_kappa = std::max(max_kappa, kappa_new);
        h = std::min(base, 2.0 * h);
      } else {
        h *= 0.5;
        if (h < opt.min_step) {
          const double k = local_kappa(z_var, path.subspace_at(t), z);
          throw PathFailure(t, k,
                            "track_witness: step underflow at t = " + std::to_string(t) +
                                " (local kappa " + std::to_string(k) + "); path passes near the ill-posed set");
        }
      }
    }
    out.points.push_back(z);
    out.multiplicities.push_back(1);
    out.residuals.push_back(system_residual(z_var, orthonormal_rows(path.at(1.0)), z));
    out.path_max_kappa.push_back(max_kappa);
  }
  detail::fill_flags(z_var, path.subspace_at(1.0), out, {});
  return out;
}

}  // namespace intcond
