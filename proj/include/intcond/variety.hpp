#pragma once

// Projective varieties Z in P^n: hypersurfaces, complete intersections and
// parametrized rational curves. Evaluation, Jacobians, smoothness, tangent
// spaces and the normal-form matrix N with T_zZ = {(0, N y, y)}.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "intcond/binary_form.hpp"
#include "intcond/grassmann.hpp"
#include "intcond/linalg.hpp"

namespace intcond {

/// A point of P^n stored as a unit vector of C^(n+1).
class ProjPoint {
 public:
  ProjPoint() = default;
  explicit ProjPoint(const CVec& v) {
    const double n = v.norm();
    if (!(n > 0.0) || !v.allFinite()) throw DomainError("ProjPoint: zero or non-finite vector");
    coords_ = v / n;
  }
  const CVec& coords() const { return coords_; }
  Eigen::Index size() const { return coords_.size(); }

 private:
  CVec coords_;
};

/// Homogeneous polynomial with sparse exponent-vector storage.
class HomogeneousPoly {
 public:
  using Exponent = std::vector<int>;

  HomogeneousPoly() = default;
  HomogeneousPoly(int num_vars, int degree, std::map<Exponent, cplx> terms)
      : num_vars_(num_vars), degree_(degree) {
    if (num_vars < 1 || degree < 0) throw DomainError("HomogeneousPoly: bad shape");
    for (auto& [e, c] : terms) {
      if (static_cast<int>(e.size()) != num_vars)
        throw DomainError("HomogeneousPoly: exponent vector has wrong length");
      int sum = 0;
      for (int x : e) {
        if (x < 0) throw DomainError("HomogeneousPoly: negative exponent");
        sum += x;
      }
      if (sum != degree) throw DomainError("HomogeneousPoly: term degree differs from declared degree");
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
        throw DomainError("HomogeneousPoly: non-finite coefficient");
      if (c != cplx{}) terms_[e] += c;
    }
    std::erase_if(terms_, [](const auto& kv) { return kv.second == cplx{}; });
    if (terms_.empty()) throw DomainError("HomogeneousPoly: all coefficients are zero");
  }

  /// sum_i a_i x_i
  static HomogeneousPoly linear(const CVec& a) {
    std::map<Exponent, cplx> t;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      Exponent e(static_cast<std::size_t>(a.size()), 0);
      e[static_cast<std::size_t>(i)] = 1;
      t[e] = a(i);
    }
    return {static_cast<int>(a.size()), 1, std::move(t)};
  }

  int num_vars() const { return num_vars_; }
  int degree() const { return degree_; }
  const std::map<Exponent, cplx>& terms() const { return terms_; }

  /// sum |c|; bounds |f(x)| for unit x, so residuals are measured relative to it.
  double coefficient_norm() const {
    double s = 0.0;
    for (const auto& kv : terms_) s += std::abs(kv.second);
    return s;
  }

  cplx operator()(const CVec& x) const {
    check(x);
    const auto pw = powers(x);
    cplx acc = 0.0;
    for (const auto& [e, c] : terms_) {
      cplx t = c;
      for (int i = 0; i < num_vars_; ++i) t *= pw[static_cast<std::size_t>(i)][static_cast<std::size_t>(e[static_cast<std::size_t>(i)])];
      acc += t;
    }
    return acc;
  }

  /// Holomorphic gradient (d f / d x_i)_i.
  CVec gradient(const CVec& x) const {
    check(x);
    const auto pw = powers(x);
    CVec g = CVec::Zero(num_vars_);
    for (const auto& [e, c] : terms_) {
      for (int i = 0; i < num_vars_; ++i) {
        const int ei = e[static_cast<std::size_t>(i)];
        if (ei == 0) continue;
        cplx t = c * static_cast<double>(ei);
        for (int j = 0; j < num_vars_; ++j) {
          const int ej = e[static_cast<std::size_t>(j)] - (j == i ? 1 : 0);
          t *= pw[static_cast<std::size_t>(j)][static_cast<std::size_t>(ej)];
        }
        g(i) += t;
      }
    }
    return g;
  }

  /// Restriction to the plane spanned by b1, b2: x = u b1 + v b2.
  BinaryForm restrict_to_line(const CVec& b1, const CVec& b2) const {
    check(b1);
    check(b2);
    // lin_pow[i][e] = (b1_i u + b2_i v)^e
    std::vector<std::vector<BinaryForm>> lin_pow(static_cast<std::size_t>(num_vars_));
    for (int i = 0; i < num_vars_; ++i) {
      BinaryForm lin{{b2(i), b1(i)}};
      auto& row = lin_pow[static_cast<std::size_t>(i)];
      row.push_back(BinaryForm{{1.0}});
      for (int e = 1; e <= degree_; ++e) row.push_back(row.back() * lin);
    }
    BinaryForm out;
    out.coeffs.assign(static_cast<std::size_t>(degree_ + 1), cplx{});
    for (const auto& [e, c] : terms_) {
      BinaryForm t{{c}};
      for (int i = 0; i < num_vars_; ++i) {
        const int ei = e[static_cast<std::size_t>(i)];
        if (ei) t = t * lin_pow[static_cast<std::size_t>(i)][static_cast<std::size_t>(ei)];
      }
      out += t;
    }
    return out;
  }

  /// For num_vars == 2: the form as coefficient vector (x0 = u, x1 = v).
  BinaryForm as_binary_form() const {
    if (num_vars_ != 2) throw DomainError("as_binary_form: not a binary form");
    BinaryForm b;
    b.coeffs.assign(static_cast<std::size_t>(degree_ + 1), cplx{});
    for (const auto& [e, c] : terms_) b.coeffs[static_cast<std::size_t>(e[0])] += c;
    return b;
  }

 private:
  void check(const CVec& x) const {
    if (x.size() != num_vars_)
      throw DomainError("HomogeneousPoly: point has " + std::to_string(x.size()) + " coordinates, expected " +
                        std::to_string(num_vars_));
  }

  std::vector<std::vector<cplx>> powers(const CVec& x) const {
    std::vector<std::vector<cplx>> pw(static_cast<std::size_t>(num_vars_));
    for (int i = 0; i < num_vars_; ++i) {
      auto& p = pw[static_cast<std::size_t>(i)];
      p.resize(static_cast<std::size_t>(degree_ + 1));
      p[0] = 1.0;
      for (int e = 1; e <= degree_; ++e) p[static_cast<std::size_t>(e)] = p[static_cast<std::size_t>(e - 1)] * x(i);
    }
    return pw;
  }

  int num_vars_ = 0;
  int degree_ = 0;
  std::map<Exponent, cplx> terms_;
};

inline cplx eval(const HomogeneousPoly& f, const ProjPoint& z) { return f(z.coords()); }

// ---------------------------------------------------------------------------

enum class VarietyKind { hypersurface, complete_intersection, param_curve };

inline std::string_view to_string(VarietyKind k) {
  switch (k) {
    case VarietyKind::hypersurface: return "hypersurface";
    case VarietyKind::complete_intersection: return "complete_intersection";
    case VarietyKind::param_curve: return "param_curve";
  }
  return "hypersurface";
}

/// Z subset P^n. Equational kinds carry s = codim equations; a parametrized
/// curve carries n+1 binary forms of a common degree d defining P^1 -> P^n.
class Variety {
 public:
  static Variety hypersurface(HomogeneousPoly f) {
    if (f.num_vars() < 3) throw DomainError("hypersurface: need n >= 2");
    if (f.degree() < 1) throw DomainError("hypersurface: degree must be >= 1");
    Variety z;
    z.kind_ = VarietyKind::hypersurface;
    z.n_ = f.num_vars() - 1;
    z.dim_ = z.n_ - 1;
    z.polys_.push_back(std::move(f));
    return z;
  }

  /// Equations f_1..f_s; when a sample point is given, the Jacobian must have
  /// rank s there.
  static Variety complete_intersection(std::vector<HomogeneousPoly> fs, std::optional<CVec> sample = {}) {
    if (fs.empty()) throw DomainError("complete_intersection: no equations");
    const int nv = fs.front().num_vars();
    for (const auto& f : fs) {
      if (f.num_vars() != nv) throw DomainError("complete_intersection: equations in different rings");
      if (f.degree() < 1) throw DomainError("complete_intersection: degree must be >= 1");
    }
    const int s = static_cast<int>(fs.size());
    if (s >= nv - 1) throw DomainError("complete_intersection: need s < n");
    Variety z;
    z.kind_ = VarietyKind::complete_intersection;
    z.n_ = nv - 1;
    z.dim_ = z.n_ - s;
    z.polys_ = std::move(fs);
    if (sample) {
      ProjPoint p(*sample);
      if (z.equation_residual(p) > 1e-8) throw DomainError("complete_intersection: sample point not on Z");
      if (numerical_rank(z.jacobian_at(p.coords()), 1e-8) < s)
        throw DomainError("complete_intersection: Jacobian rank < s at the sample point");
      z.sample_ = p.coords();
    }
    return z;
  }

  /// Components phi_0..phi_n: binary forms of equal degree without a common factor.
  static Variety param_curve(std::vector<HomogeneousPoly> comps) {
    if (comps.size() < 3) throw DomainError("param_curve: need n >= 2 components");
    const int d = comps.front().degree();
    for (const auto& c : comps) {
      if (c.num_vars() != 2) throw DomainError("param_curve: components must be binary forms");
      if (c.degree() != d) throw DomainError("param_curve: components must have equal degree");
    }
    if (d < 1) throw DomainError("param_curve: degree must be >= 1");
    Variety z;
    z.kind_ = VarietyKind::param_curve;
    z.n_ = static_cast<int>(comps.size()) - 1;
    z.dim_ = 1;
    z.polys_ = std::move(comps);
    if (z.common_root_exists()) throw DomainError("param_curve: components share a common factor");
    return z;
  }

  VarietyKind kind() const { return kind_; }
  bool is_equational() const { return kind_ != VarietyKind::param_curve; }
  int n() const { return n_; }
  int ambient_dim() const { return n_ + 1; }
  int dim() const { return dim_; }
  int codim() const { return n_ - dim_; }
  const std::optional<CVec>& sample_point() const { return sample_; }

  /// Defining equations (hypersurface / complete intersection).
  const std::vector<HomogeneousPoly>& equations() const {
    if (!is_equational()) throw CapabilityError("param_curve has no defining equations; use tangent_space");
    return polys_;
  }
  /// Parametrization components (param_curve).
  const std::vector<HomogeneousPoly>& components() const {
    if (is_equational()) throw CapabilityError("variety is not a parametrized curve");
    return polys_;
  }
  const std::vector<HomogeneousPoly>& polys() const { return polys_; }

  /// deg Z: product of equation degrees, or the parametrization degree
  /// (assumes the parametrization is birational onto its image).
  int degree() const {
    if (kind_ == VarietyKind::param_curve) return polys_.front().degree();
    int d = 1;
    for (const auto& f : polys_) d *= f.degree();
    return d;
  }

  /// max_i |f_i(z)| / coefficient_norm(f_i) at unit z.
  double equation_residual(const ProjPoint& z) const {
    double r = 0.0;
    for (const auto& f : polys_) r = std::max(r, std::abs(f(z.coords())) / f.coefficient_norm());
    return r;
  }

  CMat jacobian_at(const CVec& x) const {
    CMat j(static_cast<Eigen::Index>(polys_.size()), n_ + 1);
    for (std::size_t i = 0; i < polys_.size(); ++i) j.row(static_cast<Eigen::Index>(i)) = polys_[i].gradient(x).transpose();
    return j;
  }

  // --- parametrized curves ---

  /// phi(u, v) in C^(n+1).
  CVec curve_point(const CVec& param) const {
    CVec out(n_ + 1);
    for (int i = 0; i <= n_; ++i) out(i) = polys_[static_cast<std::size_t>(i)](param);
    return out;
  }
  /// (n+1) x 2 holomorphic derivative of phi.
  CMat curve_derivative(const CVec& param) const {
    CMat out(n_ + 1, 2);
    for (int i = 0; i <= n_; ++i) out.row(i) = polys_[static_cast<std::size_t>(i)].gradient(param).transpose();
    return out;
  }

 private:
  bool common_root_exists() const {
    // Roots of the first nonzero-ish component; a common factor means one of
    // them annihilates every component.
    const BinaryForm f0 = polys_.front().as_binary_form();
    const auto roots = binary_roots(f0, 1e-10).roots;
    for (const auto& r : roots) {
      CVec p(2);
      p << r.u, r.v;
      bool all_zero = true;
      for (const auto& c : polys_)
        if (std::abs(c(p)) > 1e-9 * c.coefficient_norm()) {
          all_zero = false;
          break;
        }
      if (all_zero) return true;
    }
    return false;
  }

  VarietyKind kind_ = VarietyKind::hypersurface;
  int n_ = 0;
  int dim_ = 0;
  std::vector<HomogeneousPoly> polys_;
  std::optional<CVec> sample_;
};

struct VarietyTolerances {
  double residual = 1e-8;  // |f_i(z)| / ||f_i||, or chordal distance to a curve
  double smooth = 1e-8;    // relative singular-value cutoff
};

// ---------------------------------------------------------------------------
// Parametrized curves: preimages

struct CurvePreimage {
  CVec param;       // unit vector (u, v)
  double distance;  // chordal distance of phi(param) to z
};

/// All parameters (u : v) with phi(u : v) = z, up to `tol` in chordal
/// distance. The conditions z_p phi_j - z_j phi_p = 0 are combined with fixed
/// pseudo-random weights into one binary form whose roots are the candidates.
inline std::vector<CurvePreimage> curve_preimages(const Variety& c, const ProjPoint& z, double tol = 1e-8) {
  const auto& comps = c.components();
  const CVec& zc = z.coords();
  if (zc.size() != c.ambient_dim()) throw DomainError("curve_preimages: dimension mismatch");
  Eigen::Index p = 0;
  zc.cwiseAbs().maxCoeff(&p);
  BinaryForm g;
  g.coeffs.assign(static_cast<std::size_t>(c.degree() + 1), cplx{});
  const BinaryForm fp = comps[static_cast<std::size_t>(p)].as_binary_form();
  for (int j = 0; j <= c.n(); ++j) {
    if (j == p) continue;
    const cplx w = std::polar(1.0, 0.7 * (j + 1)) * (1.0 + 0.1 * j);
    g += w * (zc(p) * comps[static_cast<std::size_t>(j)].as_binary_form() + (-zc(j)) * fp);
  }
  std::vector<CurvePreimage> out;
  auto consider = [&](const CVec& par) {
    const CVec img = c.curve_point(par);
    if (img.norm() == 0.0) return;
    const double dist = chordal_distance(img, zc);
    if (dist > tol) return;
    for (const auto& q : out)
      if (std::abs(q.param(0) * par(1) - q.param(1) * par(0)) < 1e-6) return;
    out.push_back({par, dist});
  };
  if (g.max_abs() <= 1e-14) {
    // z is fixed by every weighting only if phi is constant: not a curve.
    throw NumericalFailure("curve_preimages: degenerate membership form");
  }
  for (const auto& r : binary_roots(g, 1e-10).roots) {
    CVec par(2);
    par << r.u, r.v;
    consider(par);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.distance < b.distance; });
  return out;
}

/// Residual of z on Z: equation residual or chordal distance to the curve.
inline double residual_on(const Variety& z_var, const ProjPoint& z) {
  if (z.size() != z_var.ambient_dim()) throw DomainError("point dimension does not match the variety");
  if (z_var.is_equational()) return z_var.equation_residual(z);
  const auto pre = curve_preimages(z_var, z, 1e-2);
  return pre.empty() ? 1.0 : pre.front().distance;
}

inline void require_on_variety(const Variety& z_var, const ProjPoint& z, double tol) {
  const double r = residual_on(z_var, z);
  if (r > tol) throw DomainError("point is not on Z (residual " + std::to_string(r) + ")");
}

/// s x (n+1) Jacobian of the defining equations at z.
inline CMat jacobian(const Variety& z_var, const ProjPoint& z) {
  if (!z_var.is_equational())
    throw CapabilityError("jacobian: parametrized curve has no equations; use tangent_space");
  if (z.size() != z_var.ambient_dim()) throw DomainError("jacobian: dimension mismatch");
  return z_var.jacobian_at(z.coords());
}

namespace detail {

// Tangent direction of a parametrized curve at parameter p, projected to z^perp.
inline CVec curve_tangent(const Variety& c, const CVec& param, const CVec& z) {
  CVec q(2);
  q << -std::conj(param(1)), std::conj(param(0));  // q orthogonal to param
  CVec t = c.curve_derivative(param) * q;
  t -= z * z.dot(t);
  return t;
}

inline double curve_tangent_scale(const Variety& c, const CVec& param) {
  return spectral_norm(c.curve_derivative(param));
}

}  // namespace detail

/// Whether z (which must lie on Z) is a smooth point.
inline bool is_smooth(const Variety& z_var, const ProjPoint& z, const VarietyTolerances& tol = {}) {
  require_on_variety(z_var, z, tol.residual);
  if (z_var.is_equational()) {
    const RVec s = singular_values(z_var.jacobian_at(z.coords()));
    const auto k = static_cast<Eigen::Index>(z_var.codim());
    if (s.size() < k || s(0) == 0.0) return false;
    return s(k - 1) > tol.smooth * s(0);
  }
  const auto pre = curve_preimages(z_var, z, std::max(tol.residual, 1e-8));
  if (pre.size() != 1) return false;  // node: several branches through z
  const CVec t = detail::curve_tangent(z_var, pre.front().param, z.coords());
  return t.norm() > tol.smooth * detail::curve_tangent_scale(z_var, pre.front().param);
}

/// T_zZ as an m-dimensional subspace of z^perp in C^(n+1).
inline Subspace tangent_space(const Variety& z_var, const ProjPoint& z, const VarietyTolerances& tol = {}) {
  if (!is_smooth(z_var, z, tol)) throw IllPosedError(IllPosedReason::singular_point, "tangent_space: z is a singular point of Z");
  const CVec& zc = z.coords();
  if (z_var.is_equational()) {
    const CMat j = z_var.jacobian_at(zc);
    CMat stacked(j.rows() + 1, j.cols());
    // Row-normalize so the rank split does not depend on equation scaling.
    for (Eigen::Index i = 0; i < j.rows(); ++i) {
      const double nr = j.row(i).norm();
      stacked.row(i) = nr > 0 ? CMat(j.row(i) / nr) : CMat(j.row(i));
    }
    stacked.row(j.rows()) = zc.adjoint();
    const SvdResult d = svd(stacked);
    return Subspace::span_of(d.right.rightCols(z_var.dim()));
  }
  const auto pre = curve_preimages(z_var, z, std::max(tol.residual, 1e-8));
  return Subspace::span_of(detail::curve_tangent(z_var, pre.front().param, zc));
}

/// T_zL = L-hat cap z^perp, of dimension dim(L-hat) - 1.
inline Subspace tangent_space_of_subspace(const Subspace& l, const ProjPoint& z, double tol = 1e-8) {
  if (z.size() != l.ambient_dim()) throw DomainError("tangent_space_of_subspace: dimension mismatch");
  const double r = l.relative_residual(z.coords());
  if (r > tol) throw DomainError("tangent_space_of_subspace: z is not in L (residual " + std::to_string(r) + ")");
  const CVec c = l.basis().adjoint() * z.coords();
  return Subspace::span_of(l.basis() * complement_basis(c));
}

/// Matrix whose kernel (together with z) is T_zZ: the Jacobian for
/// equational Z, the conormal rows span(z, T_zZ)^perp for curves.
inline CMat local_jacobian(const Variety& z_var, const ProjPoint& z, const VarietyTolerances& tol = {}) {
  if (z_var.is_equational()) return z_var.jacobian_at(z.coords());
  const Subspace t = tangent_space(z_var, z, tol);
  CMat zt(z_var.ambient_dim(), 2);
  zt.col(0) = z.coords();
  zt.col(1) = t.basis().col(0);
  return complement_basis(zt).adjoint();
}

/// Unitary frame [z | T_zL | completion] sending z to e_0 and L-hat to
/// span(e_0, ..., e_s).
inline CMat normal_form_frame(const Subspace& l, const ProjPoint& z) {
  const Subspace tl = tangent_space_of_subspace(l, z);
  const Eigen::Index n1 = l.ambient_dim();
  CMat head(n1, tl.dim() + 1);
  head.col(0) = z.coords();
  head.rightCols(tl.dim()) = tl.basis();
  CMat q(n1, n1);
  q.leftCols(head.cols()) = head;
  q.rightCols(n1 - head.cols()) = complement_basis(head);
  return q;
}

/// N = -(d_X f)^{-1} d_Y f for a Jacobian `jac` expressed in `frame` whose
/// first column is z and next s columns span T_zL.
inline CMat n_matrix_in_frame(const CMat& jac, const CMat& frame, Eigen::Index s) {
  const CMat jf = jac * frame;
  const Eigen::Index m = frame.cols() - 1 - s;
  const CMat dx = jf.middleCols(1, s);
  const CMat dy = jf.rightCols(m);
  // Rows of jac have unit norm, so the smallest singular value of d_X f is
  // measured on an absolute scale.
  const RVec sv = singular_values(dx);
  if (!(sv(sv.size() - 1) > 1e-12 * std::max(1.0, sv(0))))
    throw IllPosedError(IllPosedReason::nontransversal, "n_matrix: d_X f is singular, L meets Z nontransversally");
  return -dx.fullPivLu().solve(dy);
}

/// Normal-form matrix N (s x m) at z for L through z.
inline CMat n_matrix(const Variety& z_var, const Subspace& l, const ProjPoint& z, const VarietyTolerances& tol = {}) {
  const auto s = static_cast<Eigen::Index>(z_var.codim());
  if (l.dim() != s + 1) throw DomainError("n_matrix: L must have linear dimension codim Z + 1");
  if (!is_smooth(z_var, z, tol)) throw IllPosedError(IllPosedReason::singular_point, "n_matrix: z is singular on Z");
  CMat jac = local_jacobian(z_var, z, tol);
  for (Eigen::Index i = 0; i < jac.rows(); ++i) {
    const double nr = jac.row(i).norm();
    if (nr > 0) jac.row(i) /= nr;
  }
  return n_matrix_in_frame(jac, normal_form_frame(l, z), s);
}

}  // namespace intcond
