#pragma once

// JSON encoding of varieties, subspaces, matrices and reports.
//
// Complex numbers are [re, im] pairs. Infinite condition numbers are written
// as the string "inf" next to a reason tag.

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "intcond/condition.hpp"
#include "intcond/tube.hpp"
#include "intcond/volume.hpp"

namespace intcond {

using json = nlohmann::json;

inline constexpr const char* kSchemaVersion = "1.0";
inline constexpr const char* kToolVersion = "0.1.0";

/// Input that does not match a schema; `pointer` is a JSON pointer to the field.
class SchemaError : public Error {
 public:
  SchemaError(std::string pointer, const std::string& what)
      : Error(pointer + ": " + what), pointer_(std::move(pointer)) {}
  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

namespace io_detail {

inline const json& field(const json& j, const std::string& key, const std::string& where) {
  if (!j.is_object()) throw SchemaError(where.empty() ? "/" : where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(where + "/" + key, "missing required field");
  return *it;
}

inline long long get_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw SchemaError(where, "expected an integer");
  return j.get<long long>();
}

inline double get_real(const json& j, const std::string& where) {
  if (!j.is_number()) throw SchemaError(where, "expected a number");
  return j.get<double>();
}

inline cplx get_complex(const json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw SchemaError(where, "expected a complex number [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace io_detail

inline json complex_to_json(cplx c) { return json::array({c.real(), c.imag()}); }

/// +inf becomes "inf"; finite values stay numbers.
inline json real_to_json(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  return v;
}

inline double real_from_json(const json& j, const std::string& where) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
    if (s == "nan") return std::nan("");
    throw SchemaError(where, "expected a number or \"inf\"");
  }
  return io_detail::get_real(j, where);
}

inline json vector_to_json(const CVec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(complex_to_json(v(i)));
  return a;
}

inline CVec vector_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw SchemaError(where, "expected a nonempty array of complex numbers");
  CVec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    v(static_cast<Eigen::Index>(i)) = io_detail::get_complex(j[i], where + "/" + std::to_string(i));
  return v;
}

// ---------------------------------------------------------------------------
// Matrices: {rows, cols, entries: row-major [[re, im], ...] or [[row...], ...]}

inline json matrix_to_json(const CMat& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) r.push_back(complex_to_json(m(i, j)));
    rows.push_back(r);
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", rows}};
}

inline CMat matrix_from_json(const json& j, const std::string& where = "") {
  using namespace io_detail;
  const auto rows = get_int(field(j, "rows", where), where + "/rows");
  const auto cols = get_int(field(j, "cols", where), where + "/cols");
  if (rows < 1 || cols < 1) throw SchemaError(where + "/rows", "matrix dimensions must be positive");
  const json& e = field(j, "entries", where);
  const std::string ew = where + "/entries";
  if (!e.is_array() || static_cast<long long>(e.size()) != rows) throw SchemaError(ew, "expected `rows` row arrays");
  CMat m(rows, cols);
  for (long long i = 0; i < rows; ++i) {
    const json& r = e[static_cast<std::size_t>(i)];
    const std::string rw = ew + "/" + std::to_string(i);
    if (!r.is_array() || static_cast<long long>(r.size()) != cols) throw SchemaError(rw, "expected `cols` entries");
    for (long long c = 0; c < cols; ++c)
      m(i, c) = get_complex(r[static_cast<std::size_t>(c)], rw + "/" + std::to_string(c));
  }
  if (!all_finite(m)) throw SchemaError(ew, "non-finite entry");
  return m;
}

// ---------------------------------------------------------------------------
// Subspaces: {ambient_dim, dim, basis: row-major [[re, im], ...] of length
// ambient_dim * dim}. Nested row arrays are accepted on input.

inline json subspace_to_json(const Subspace& s) {
  json flat = json::array();
  const CMat& b = s.basis();
  for (Eigen::Index i = 0; i < b.rows(); ++i)
    for (Eigen::Index j = 0; j < b.cols(); ++j) flat.push_back(complex_to_json(b(i, j)));
  return {{"ambient_dim", s.ambient_dim()}, {"dim", s.dim()}, {"basis", flat}};
}

/// The basis must be orthonormal to 1e-6; it is re-orthonormalized on load.
inline Subspace subspace_from_json(const json& j, const std::string& where = "") {
  using namespace io_detail;
  const auto n = get_int(field(j, "ambient_dim", where), where + "/ambient_dim");
  const auto k = get_int(field(j, "dim", where), where + "/dim");
  const json& basis = field(j, "basis", where);
  if (n < 2 || k < 1 || k >= n) throw SchemaError(where + "/dim", "need 1 <= dim < ambient_dim");
  if (!basis.is_array() || basis.empty()) throw SchemaError(where + "/basis", "expected an array");
  // Flat form: elements are complex entries ([re, im] or a real number).
  // Nested form: one array of k complex entries per row.
  const bool flat = basis[0].is_number() || (basis[0].is_array() && !basis[0].empty() && basis[0][0].is_number());
  json entries = basis;
  if (flat) {
    if (static_cast<long long>(basis.size()) != n * k)
      throw SchemaError(where + "/basis", "expected ambient_dim * dim entries");
    entries = json::array();
    for (long long i = 0; i < n; ++i) {
      json row = json::array();
      for (long long c = 0; c < k; ++c) row.push_back(basis[static_cast<std::size_t>(i * k + c)]);
      entries.push_back(row);
    }
  }
  const json mat = {{"rows", n}, {"cols", k}, {"entries", entries}};
  CMat b;
  try {
    b = matrix_from_json(mat, "");
  } catch (const SchemaError& e) {
    throw SchemaError(where + "/basis", e.what());
  }
  const double err = (b.adjoint() * b - CMat::Identity(k, k)).norm();
  if (err > 1e-6)
    throw SchemaError(where + "/basis", "basis is not orthonormal (||B*B - I|| = " + std::to_string(err) + ")");
  return Subspace::span_of(b);
}

/// A subspace given either as {ambient_dim, dim, basis} or as equations
/// {"equations": matrix} meaning the kernel of that matrix.
inline Subspace linear_space_from_json(const json& j, const std::string& where = "") {
  if (j.is_object() && j.contains("equations")) return Subspace::kernel_of(matrix_from_json(j["equations"], where + "/equations"));
  if (j.is_object() && j.contains("span")) return Subspace::span_of(matrix_from_json(j["span"], where + "/span"));
  return subspace_from_json(j, where);
}

// ---------------------------------------------------------------------------
// Varieties

inline json poly_to_json(const HomogeneousPoly& f) {
  json terms = json::array();
  for (const auto& [e, c] : f.terms()) terms.push_back({{"exps", e}, {"re", c.real()}, {"im", c.imag()}});
  return {{"num_vars", f.num_vars()}, {"degree", f.degree()}, {"terms", terms}};
}

inline HomogeneousPoly poly_from_json(const json& j, int num_vars, const std::string& where) {
  using namespace io_detail;
  const auto d = get_int(field(j, "degree", where), where + "/degree");
  if (j.contains("num_vars") && get_int(j["num_vars"], where + "/num_vars") != num_vars)
    throw SchemaError(where + "/num_vars", "does not match n + 1");
  const json& t = field(j, "terms", where);
  if (!t.is_array()) throw SchemaError(where + "/terms", "expected an array");
  std::map<std::vector<int>, cplx> terms;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const std::string tw = where + "/terms/" + std::to_string(i);
    const json& e = field(t[i], "exps", tw);
    if (!e.is_array() || static_cast<int>(e.size()) != num_vars)
      throw SchemaError(tw + "/exps", "expected n + 1 nonnegative integers");
    std::vector<int> exps;
    for (std::size_t a = 0; a < e.size(); ++a) {
      const auto v = get_int(e[a], tw + "/exps/" + std::to_string(a));
      if (v < 0) throw SchemaError(tw + "/exps/" + std::to_string(a), "negative exponent");
      exps.push_back(static_cast<int>(v));
    }
    cplx c;
    if (t[i].contains("coef")) {
      c = get_complex(t[i]["coef"], tw + "/coef");
    } else {
      c = {get_real(field(t[i], "re", tw), tw + "/re"), t[i].contains("im") ? get_real(t[i]["im"], tw + "/im") : 0.0};
    }
    terms[exps] += c;
  }
  try {
    return HomogeneousPoly(num_vars, static_cast<int>(d), terms);
  } catch (const DomainError& ex) {
    throw SchemaError(where, ex.what());
  }
}

/// {type: hypersurface | complete_intersection | param_curve, n, polys: [...],
///  sample_point?: [...], name?}. For param_curve the polys are the n + 1
/// binary forms in (u, v).
inline json variety_to_json(const Variety& v, const std::string& name = "") {
  json polys = json::array();
  const auto& ps = v.polys();
  for (const auto& p : ps) polys.push_back(poly_to_json(p));
  json j = {{"schema_version", kSchemaVersion}, {"type", std::string(to_string(v.kind()))}, {"n", v.n()}, {"polys", polys}};
  if (!name.empty()) j["name"] = name;
  return j;
}

inline Variety variety_from_json(const json& j) {
  using namespace io_detail;
  const json& type_j = field(j, "type", "");
  if (!type_j.is_string()) throw SchemaError("/type", "expected a string");
  const std::string type = type_j.get<std::string>();
  const auto n = get_int(field(j, "n", ""), "/n");
  if (n < 1) throw SchemaError("/n", "projective dimension must be >= 1");
  const json& pj = field(j, "polys", "");
  if (!pj.is_array() || pj.empty()) throw SchemaError("/polys", "expected a nonempty array");
  const int vars = type == "param_curve" ? 2 : static_cast<int>(n) + 1;
  std::vector<HomogeneousPoly> polys;
  for (std::size_t i = 0; i < pj.size(); ++i) polys.push_back(poly_from_json(pj[i], vars, "/polys/" + std::to_string(i)));
  try {
    if (type == "hypersurface") {
      if (polys.size() != 1) throw SchemaError("/polys", "hypersurface takes exactly one polynomial");
      return Variety::hypersurface(polys[0]);
    }
    if (type == "complete_intersection") {
      std::optional<CVec> sample;
      if (j.contains("sample_point")) sample = vector_from_json(j["sample_point"], "/sample_point");
      return Variety::complete_intersection(polys, sample);
    }
    if (type == "param_curve") {
      if (static_cast<long long>(polys.size()) != n + 1) throw SchemaError("/polys", "param_curve needs n + 1 components");
      return Variety::param_curve(polys);
    }
  } catch (const DomainError& ex) {
    throw SchemaError("/polys", ex.what());
  }
  throw SchemaError("/type", "unknown variety type '" + type + "'");
}

inline json point_to_json(const ProjPoint& p) { return vector_to_json(p.coords()); }

inline ProjPoint point_from_json(const json& j, const std::string& where = "") {
  try {
    return ProjPoint(vector_from_json(j, where));
  } catch (const DomainError& ex) {
    throw SchemaError(where, ex.what());
  }
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError(path, "cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError(path, std::string("invalid JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Reports

inline json reason_to_json(IllPosedReason r) {
  if (r == IllPosedReason::none) return nullptr;
  return std::string(to_string(r));
}

inline json intersection_to_json(const IntersectionSet& w) {
  json pts = json::array();
  for (std::size_t i = 0; i < w.size(); ++i) {
    json p = {{"point", point_to_json(w.points[i])},
              {"multiplicity", w.multiplicities.empty() ? 1 : w.multiplicities[i]}};
    if (i < w.residuals.size()) p["residual"] = w.residuals[i];
    if (i < w.transversal.size()) p["transversal"] = static_cast<bool>(w.transversal[i]);
    if (i < w.singular.size()) p["singular"] = static_cast<bool>(w.singular[i]);
    if (i < w.path_max_kappa.size()) p["path_max_kappa"] = real_to_json(w.path_max_kappa[i]);
    pts.push_back(p);
  }
  return {{"points", pts},
          {"total_multiplicity", w.total_multiplicity()},
          {"multiplicity_ambiguous", w.multiplicity_ambiguous}};
}

inline json condition_report_to_json(const ConditionReport& r) {
  json pts = json::array();
  for (const auto& pc : r.per_point)
    pts.push_back({{"point", point_to_json(pc.point)},
                   {"multiplicity", pc.multiplicity},
                   {"kappa_angle", real_to_json(pc.kappa_angle)},
                   {"kappa_nmatrix", real_to_json(pc.kappa_nmatrix)},
                   {"kappa_cnt", real_to_json(pc.kappa_cnt)},
                   {"min_angle", pc.min_angle},
                   {"dist_g_local_schubert", pc.dist_g_local_schubert},
                   {"dist_p_local_schubert", pc.dist_p_local_schubert},
                   {"transversal", pc.transversal},
                   {"singular", pc.singular}});
  return {{"per_point", pts},
          {"kappa_global", real_to_json(r.kappa_global)},
          {"ill_posed_reason", reason_to_json(r.ill_posed_reason)},
          {"multiplicity_ambiguous", r.multiplicity_ambiguous}};
}

inline json fd_condition_to_json(const FdCondition& f) {
  return {{"value", real_to_json(f.value)},
          {"value_half_step", real_to_json(f.value_half_step)},
          {"richardson_rel_diff", f.richardson_rel_diff},
          {"richardson_ok", f.richardson_ok},
          {"holomorphy_residual", f.holomorphy_residual},
          {"holomorphic_ok", f.holomorphic_ok}};
}

inline json interval_to_json(const Interval& i) { return json::array({real_to_json(i.lo), real_to_json(i.hi)}); }

inline json tail_estimate_to_json(const TailEstimate& t) {
  json rows = json::array();
  for (std::size_t i = 0; i < t.eps_grid.size(); ++i)
    rows.push_back({{"eps", t.eps_grid[i]},
                    {"empirical", t.empirical_tail[i].estimate},
                    {"hits", t.empirical_tail[i].hits},
                    {"ci95", interval_to_json(t.empirical_tail[i].ci)},
                    {"predicted_model", t.predicted_tail[i]}});
  return {{"tail", rows},
          {"sample_count", t.sample_count},
          {"seed", t.seed},
          {"mean_log_kappa", t.mean_log_kappa},
          {"mean_log_kappa_ci95", interval_to_json(t.mean_log_kappa_ci)},
          {"ill_posed_hits", t.ill_posed_hits},
          {"numerical_failures", t.failures},
          {"audited", t.audited},
          {"audit_max_rel_diff", t.audit_max_rel_diff},
          {"slope", real_to_json(t.slope.slope)},
          {"slope_ci95", interval_to_json(t.slope.ci)},
          {"slope_points_used", t.slope.points_used}};
}

}  // namespace intcond
