#pragma once

// Command-line front end: intersect, kappa, track, volumes, tail.
//
// Exit codes: 0 success, 1 usage or schema error, 2 ill-posed input
// (kappa = inf, positive-dimensional intersection, or a tracked path that
// runs into an ill-posed subspace), 3 numerical failure.

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "intcond/intcond.hpp"

namespace intcond::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kIllPosed = 2, kNumerical = 3 };

// A tracking failure whose local kappa reaches this is reported as an
// ill-posed path (exit 2) rather than a numerical failure (exit 3). Step
// underflow at a tangency happens with kappa of order min_step^(-1/2).
inline constexpr double kIllPosedKappa = 1e3;

struct RunConfig {
  std::string subcommand;
  std::string variety_path;
  std::string subspace_path;
  std::string kernel_path;
  std::string image_path;
  std::string point_path;
  std::string path_path;
  std::string output_path;
  std::string raw_csv_path;
  std::string plot_data_path;
  std::string method = "all";
  std::string format = "json";
  std::uint64_t seed = 0;
  double angle_tol = 1e-10;
  double residual_tol = 1e-8;
  double fd_step = 1e-5;
  unsigned threads = 1;
  std::size_t samples = 10000;
  std::vector<double> eps;
  int steps = 200;
  int bootstrap = 200;
  // volumes
  int n = 2;
  int m = 1;
  int deg = 0;
  int genus = -1;
  std::string kind;
  bool assert_singular = false;

  json to_json() const {
    json j = {{"subcommand", subcommand}, {"format", format}, {"seed", seed},
              {"angle_tol", angle_tol},   {"residual_tol", residual_tol}};
    auto put = [&](const char* k, const std::string& v) {
      if (!v.empty()) j[k] = v;
    };
    put("variety", variety_path);
    put("subspace", subspace_path);
    put("kernel", kernel_path);
    put("image", image_path);
    put("point", point_path);
    put("path", path_path);
    put("output", output_path);
    if (subcommand == "kappa") {
      j["method"] = method;
      j["fd_step"] = fd_step;
    }
    if (subcommand == "track") j["steps"] = steps;
    if (subcommand == "tail") {
      j["samples"] = samples;
      j["threads"] = threads;
      j["eps"] = eps;
      j["bootstrap"] = bootstrap;
      put("raw_csv", raw_csv_path);
      put("plot_data", plot_data_path);
    }
    if (subcommand == "volumes" || subcommand == "tail") {
      j["n"] = n;
      j["m"] = m;
      if (deg > 0) j["deg"] = deg;
      if (genus >= 0) j["genus"] = genus;
      put("kind", kind);
    }
    return j;
  }
};

struct Outcome {
  json result;
  int code = kOk;
  std::string text;  // text rendering
  std::string csv;   // csv rendering
};

namespace detail {

inline ConditionOptions condition_options(const RunConfig& c) {
  ConditionOptions o;
  o.angle_tol = c.angle_tol;
  o.variety.residual = c.residual_tol;
  return o;
}

inline std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream s;
  s << std::setprecision(12) << v;
  return s.str();
}

inline std::string fmt_point(const ProjPoint& p) {
  std::ostringstream s;
  s << "(";
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const cplx c = p.coords()(i);
    if (i) s << " : ";
    s << std::setprecision(6) << c.real();
    if (std::abs(c.imag()) > 1e-12) s << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i";
  }
  s << ")";
  return s.str();
}

inline Subspace load_linear_space(const RunConfig& c) {
  int given = !c.subspace_path.empty() + !c.kernel_path.empty() + !c.image_path.empty();
  if (given != 1) throw SchemaError("/", "give exactly one of --subspace/--line/--hyperplane, --kernel, --image");
  if (!c.subspace_path.empty()) return linear_space_from_json(read_json_file(c.subspace_path));
  if (!c.kernel_path.empty()) return Subspace::kernel_of(matrix_from_json(read_json_file(c.kernel_path)));
  return Subspace::span_of(matrix_from_json(read_json_file(c.image_path)));
}

inline HurwitzParams hurwitz_for(int n, int m, int deg, int genus, const std::string& kind) {
  HurwitzParams p{deg, 0, m, n - m};
  if (genus >= 0) {
    p.sectional_genus = genus;
  } else if (!kind.empty()) {
    p.sectional_genus = sectional_genus(sectional_kind_from_string(kind), deg);
  } else if (m == n - 1) {
    p.sectional_genus = sectional_genus(SectionalKind::hypersurface, deg);
  } else if (m == 1) {
    p.sectional_genus = sectional_genus(SectionalKind::rational_curve, deg);
  } else {
    throw CapabilityError("sectional genus unknown for this (n, m); pass --genus");
  }
  return p;
}

inline HurwitzParams hurwitz_for_variety(const Variety& z, const RunConfig& c) {
  const int deg = c.deg > 0 ? c.deg : z.degree();
  if (c.genus >= 0 || !c.kind.empty()) return hurwitz_for(z.n(), z.dim(), deg, c.genus, c.kind);
  if (z.kind() == VarietyKind::param_curve) return {deg, sectional_genus(SectionalKind::rational_curve, deg), z.dim(), z.codim()};
  if (z.kind() == VarietyKind::hypersurface)
    return {deg, sectional_genus(SectionalKind::hypersurface, deg), z.dim(), z.codim()};
  throw CapabilityError("sectional genus unknown for this variety; pass --genus");
}

// ---------------------------------------------------------------------------

inline Outcome run_intersect(const RunConfig& c) {
  const Variety z = variety_from_json(read_json_file(c.variety_path));
  const Subspace l = load_linear_space(c);
  IntersectOptions opt;
  opt.angle_tol = c.angle_tol;
  opt.variety.residual = c.residual_tol;
  Outcome o;
  try {
    const IntersectionSet w = intersect(z, l, opt);
    o.result = intersection_to_json(w);
    bool ill = false;
    std::ostringstream t, csv;
    csv << "index,multiplicity,transversal,singular,residual,point\n";
    t << w.size() << " point(s), total multiplicity " << w.total_multiplicity() << "\n";
    for (std::size_t i = 0; i < w.size(); ++i) {
      const bool tr = w.transversal[i];
      ill = ill || !tr;
      t << "  " << fmt_point(w.points[i]) << "  mult " << w.multiplicities[i] << (tr ? "" : "  NOT transversal")
        << (w.singular[i] ? "  singular" : "") << "\n";
      csv << i << "," << w.multiplicities[i] << "," << tr << "," << w.singular[i] << "," << fmt(w.residuals[i]) << ",\""
          << fmt_point(w.points[i]) << "\"\n";
    }
    o.result["ill_posed"] = ill;
    o.code = ill ? kIllPosed : kOk;
    o.text = t.str();
    o.csv = csv.str();
  } catch (const IllPosedError& e) {
    o.result = {{"ill_posed", true}, {"ill_posed_reason", to_string(e.reason())}, {"message", e.what()}};
    o.text = std::string("ill-posed: ") + std::string(to_string(e.reason())) + "\n";
    o.csv = "ill_posed_reason\n" + std::string(to_string(e.reason())) + "\n";
    o.code = kIllPosed;
  }
  return o;
}

inline Outcome run_kappa(const RunConfig& c) {
  static const std::vector<std::string> methods = {"angle", "nmatrix", "cnt", "fd-kernel", "fd-image", "all"};
  if (std::find(methods.begin(), methods.end(), c.method) == methods.end())
    throw SchemaError("--method", "unknown method '" + c.method + "'");
  const Variety z = variety_from_json(read_json_file(c.variety_path));
  const Subspace l = load_linear_space(c);
  const ConditionOptions opt = condition_options(c);

  ConditionReport rep;
  if (!c.point_path.empty()) {
    rep = kappa_global(z, l, {point_from_json(read_json_file(c.point_path))}, opt);
  } else {
    rep = kappa_global(z, l, opt);
  }
  Outcome o;
  o.result = condition_report_to_json(rep);

  const bool want_fd_k = c.method == "fd-kernel" || c.method == "all";
  const bool want_fd_i = c.method == "fd-image" || c.method == "all";
  const CMat a = c.kernel_path.empty() ? l.kernel_matrix() : matrix_from_json(read_json_file(c.kernel_path));
  const CMat b = c.image_path.empty() ? l.basis() : matrix_from_json(read_json_file(c.image_path));
  double selected = rep.per_point.empty() ? kInf : 1.0;
  std::vector<double> fd_k(rep.per_point.size(), kInf), fd_i(rep.per_point.size(), kInf);
  for (std::size_t i = 0; i < rep.per_point.size(); ++i) {
    auto& pj = o.result["per_point"][i];
    const auto& pc = rep.per_point[i];
    if (pc.transversal && want_fd_k) {
      const FdCondition f = kercond_fd(z, a, pc.point, c.fd_step, opt);
      fd_k[i] = f.value;
      pj["kercond_fd"] = fd_condition_to_json(f);
      pj["matrix_condition_A"] = real_to_json(matrix_condition(a));
    }
    if (pc.transversal && want_fd_i) {
      const FdCondition f = imcond_fd(z, b, pc.point, c.fd_step, opt);
      fd_i[i] = f.value;
      pj["imcond_fd"] = fd_condition_to_json(f);
      pj["matrix_condition_B"] = real_to_json(matrix_condition(b));
    }
    double v = pc.kappa_angle;
    if (c.method == "nmatrix") v = pc.kappa_nmatrix;
    if (c.method == "cnt") v = pc.kappa_cnt;
    if (c.method == "fd-kernel") v = fd_k[i];
    if (c.method == "fd-image") v = fd_i[i];
    selected = std::max(selected, v);
  }
  o.result["method"] = c.method;
  o.result["kappa"] = real_to_json(selected);
  o.code = std::isfinite(rep.kappa_global) ? kOk : kIllPosed;

  std::ostringstream t, csv;
  t << "kappa_global = " << fmt(rep.kappa_global);
  if (rep.ill_posed_reason != IllPosedReason::none) t << "  (ill-posed: " << to_string(rep.ill_posed_reason) << ")";
  t << "\n";
  csv << "point,multiplicity,transversal,min_angle,kappa_angle,kappa_nmatrix,kappa_cnt,dist_g,dist_p,kercond_fd,imcond_fd\n";
  for (std::size_t i = 0; i < rep.per_point.size(); ++i) {
    const auto& pc = rep.per_point[i];
    t << "  " << fmt_point(pc.point) << "  angle " << fmt(pc.min_angle) << "  kappa " << fmt(pc.kappa_angle)
      << " / " << fmt(pc.kappa_nmatrix) << " / " << fmt(pc.kappa_cnt);
    if (want_fd_k) t << "  kercond " << fmt(fd_k[i]);
    if (want_fd_i) t << "  imcond " << fmt(fd_i[i]);
    t << "\n";
    csv << "\"" << fmt_point(pc.point) << "\"," << pc.multiplicity << "," << pc.transversal << "," << fmt(pc.min_angle)
        << "," << fmt(pc.kappa_angle) << "," << fmt(pc.kappa_nmatrix) << "," << fmt(pc.kappa_cnt) << ","
        << fmt(pc.dist_g_local_schubert) << "," << fmt(pc.dist_p_local_schubert) << "," << fmt(fd_k[i]) << ","
        << fmt(fd_i[i]) << "\n";
  }
  if (rep.per_point.empty() && rep.ill_posed_reason != IllPosedReason::none)
    csv << ",,,,,,,,,,\n";
  o.text = t.str();
  o.csv = csv.str();
  return o;
}

inline SubspacePath load_path(const std::string& file) {
  const json j = read_json_file(file);
  const json& wps = io_detail::field(j, "waypoints", "");
  if (!wps.is_array() || wps.size() < 2) throw SchemaError("/waypoints", "need at least two waypoints");
  SubspacePath p;
  for (std::size_t i = 0; i < wps.size(); ++i)
    p.waypoints.push_back(linear_space_from_json(wps[i], "/waypoints/" + std::to_string(i)).kernel_matrix());
  return p;
}

inline Outcome run_track(const RunConfig& c) {
  const Variety z = variety_from_json(read_json_file(c.variety_path));
  const SubspacePath path = load_path(c.path_path);
  IntersectionSet start;
  if (!c.point_path.empty()) {
    const json pj = read_json_file(c.point_path);
    if (!pj.is_array()) throw SchemaError("/", "expected an array of points");
    for (std::size_t i = 0; i < pj.size(); ++i) {
      start.points.push_back(point_from_json(pj[i], "/" + std::to_string(i)));
      start.multiplicities.push_back(1);
    }
  } else {
    start = intersect(z, path.subspace_at(0.0));
  }
  Outcome o;
  std::ostringstream t, csv;
  try {
    const IntersectionSet end = track_witness(z, path, start, c.steps);
    o.result = intersection_to_json(end);
    o.result["start"] = intersection_to_json(start);
    // For a closed loop, report how far the end set is from the start set.
    if (same_span(path.subspace_at(0.0), path.subspace_at(1.0))) {
      double worst = 0.0;
      for (const auto& p : start.points) {
        double best = kInf;
        for (const auto& q : end.points) best = std::min(best, chordal_distance(p.coords(), q.coords()));
        worst = std::max(worst, best);
      }
      o.result["closed_loop"] = true;
      o.result["set_distance"] = worst;
    }
    t << "tracked " << end.size() << " point(s)\n";
    csv << "index,path_max_kappa,point\n";
    for (std::size_t i = 0; i < end.size(); ++i) {
      t << "  " << fmt_point(end.points[i]) << "  max kappa on path " << fmt(end.path_max_kappa[i]) << "\n";
      csv << i << "," << fmt(end.path_max_kappa[i]) << ",\"" << fmt_point(end.points[i]) << "\"\n";
    }
    o.code = kOk;
  } catch (const PathFailure& e) {
    const bool ill = !(e.local_kappa() < kIllPosedKappa);
    o.result = {{"failed", true},
                {"t", e.t()},
                {"local_kappa", real_to_json(e.local_kappa())},
                {"ill_posed_suspected", ill},
                {"message", e.what()}};
    t << "path failure at t = " << fmt(e.t()) << ", local kappa " << fmt(e.local_kappa())
      << (ill ? " (path meets an ill-posed subspace)" : "") << "\n";
    csv << "t,local_kappa,ill_posed_suspected\n" << fmt(e.t()) << "," << fmt(e.local_kappa()) << "," << ill << "\n";
    o.code = ill ? kIllPosed : kNumerical;
  }
  o.text = t.str();
  o.csv = csv.str();
  return o;
}

inline Outcome run_volumes(const RunConfig& c) {
  if (c.n < 2 || c.m < 1 || c.m >= c.n) throw SchemaError("--m", "need 1 <= m < n and n >= 2");
  const int n = c.n, m = c.m, s = n - m;
  struct Row {
    std::string name;
    PiMultiple exact;
  };
  std::vector<Row> rows = {
      {"vol U(" + std::to_string(n + 1) + ")", vol_unitary_exact(n + 1)},
      {"vol S^" + std::to_string(2 * n + 1), vol_sphere_exact(2 * n + 1)},
      {"vol P^" + std::to_string(n), vol_proj_exact(n)},
      {"vol G(" + std::to_string(s + 1) + ",C^" + std::to_string(n + 1) + ")", vol_grassmann_exact(s + 1, n + 1)},
      {"plucker_degree G(" + std::to_string(s + 1) + ",C^" + std::to_string(n + 1) + ")",
       {Rational(plucker_degree(s + 1, n + 1)), 0}},
      {"vol H_lin / vol G", vol_schubert_lin_ratio_exact(m, s)},
  };
  std::vector<int> degs;
  if (c.deg > 0) degs = {c.deg};
  else degs = {2, 3, 4};
  json hurwitz = json::array();
  for (int d : degs) {
    HurwitzParams p;
    try {
      p = hurwitz_for(n, m, d, c.genus, c.kind);
    } catch (const CapabilityError&) {
      if (c.deg > 0) throw;
      continue;
    }
    const std::string tag = "(deg " + std::to_string(d) + ", g " + std::to_string(p.sectional_genus) + ")";
    rows.push_back({"rdeg Sigma(Z) " + tag, {Rational(hurwitz_rdeg(p)), 0}});
    rows.push_back({"vol Sigma(Z) / vol G " + tag, hurwitz_vol_ratio_exact(p)});
    hurwitz.push_back({{"deg_z", d}, {"sectional_genus", p.sectional_genus}, {"dim_z", m}, {"codim_z", s}});
  }
  Outcome o;
  json table = json::array();
  std::ostringstream t, csv;
  csv << "quantity,exact,value\n";
  for (const auto& r : rows) {
    table.push_back({{"quantity", r.name}, {"exact", to_string(r.exact)}, {"value", r.exact.value()}});
    t << std::left << std::setw(40) << r.name << std::setw(24) << to_string(r.exact) << fmt(r.exact.value()) << "\n";
    csv << "\"" << r.name << "\",\"" << to_string(r.exact) << "\"," << fmt(r.exact.value()) << "\n";
  }
  if (m == 1 && c.assert_singular)
    t << "warning: the Hurwitz volume formula assumes Sing(Z) of codimension >= 2, i.e. smooth plane curves\n";
  o.result = {{"table", table}, {"hurwitz_params", hurwitz}};
  o.text = t.str();
  o.csv = csv.str();
  return o;
}

inline Outcome run_tail(const RunConfig& c) {
  const Variety z = variety_from_json(read_json_file(c.variety_path));
  if (c.samples < 1) throw SchemaError("--samples", "must be positive");
  std::vector<double> eps = c.eps.empty() ? default_eps_grid() : c.eps;
  for (double e : eps)
    if (!(e > 0.0 && e <= 1.0)) throw SchemaError("--eps", "values must lie in (0, 1]");
  const HurwitzParams hp = hurwitz_for_variety(z, c);
  SampleOptions so;
  so.threads = c.threads;
  so.condition = condition_options(c);
  const KappaSamples ks = sample_kappa(z, c.samples, c.seed, so);
  const TailEstimate te = tail_estimate(ks, hp, eps, c.bootstrap);
  Outcome o;
  o.result = tail_estimate_to_json(te);
  o.result["model"] = "first-order tube model: (vol Sigma / vol G) * pi * eps^2";
  o.result["hurwitz_params"] = {{"deg_z", hp.deg_z}, {"sectional_genus", hp.sectional_genus}, {"dim_z", hp.dim_z},
                                {"codim_z", hp.codim_z}};
  if (!c.raw_csv_path.empty()) {
    std::ofstream f(c.raw_csv_path);
    if (!f) throw SchemaError("--raw-csv", "cannot write " + c.raw_csv_path);
    f << "index,kappa\n" << std::setprecision(17);
    for (std::size_t i = 0; i < ks.kappa.size(); ++i) f << i << "," << fmt(ks.kappa[i]) << "\n";
  }
  std::ostringstream t, csv;
  csv << "eps,empirical,ci_lo,ci_hi,predicted_model\n";
  t << te.sample_count << " samples, seed " << te.seed << ", ill-posed hits " << te.ill_posed_hits << "\n";
  t << "eps        empirical    95% CI                       model\n";
  for (std::size_t i = 0; i < te.eps_grid.size(); ++i) {
    const auto& tp = te.empirical_tail[i];
    t << std::left << std::setw(11) << fmt(te.eps_grid[i]) << std::setw(13) << fmt(tp.estimate) << "[" << fmt(tp.ci.lo)
      << ", " << fmt(tp.ci.hi) << "]  " << fmt(te.predicted_tail[i]) << "\n";
    csv << fmt(te.eps_grid[i]) << "," << fmt(tp.estimate) << "," << fmt(tp.ci.lo) << "," << fmt(tp.ci.hi) << ","
        << fmt(te.predicted_tail[i]) << "\n";
  }
  t << "log-log slope " << fmt(te.slope.slope) << " [" << fmt(te.slope.ci.lo) << ", " << fmt(te.slope.ci.hi) << "]\n";
  t << "mean log kappa " << fmt(te.mean_log_kappa) << "\n";
  if (!c.plot_data_path.empty()) {
    std::ofstream f(c.plot_data_path);
    if (!f) throw SchemaError("--plot-data", "cannot write " + c.plot_data_path);
    f << "eps,empirical,predicted\n";
    for (std::size_t i = 0; i < te.eps_grid.size(); ++i)
      f << fmt(te.eps_grid[i]) << "," << fmt(te.empirical_tail[i].estimate) << "," << fmt(te.predicted_tail[i]) << "\n";
  }
  o.text = t.str();
  o.csv = csv.str();
  return o;
}

inline void emit(const RunConfig& c, const Outcome& o, std::ostream& out) {
  std::string body;
  if (c.format == "json") {
    const json j = {{"schema_version", kSchemaVersion},
                    {"tool_version", kToolVersion},
                    {"command", c.subcommand},
                    {"config", c.to_json()},
                    {"exit_code", o.code},
                    {"result", o.result}};
    body = j.dump(2) + "\n";
  } else if (c.format == "csv") {
    body = "# intcond " + std::string(kToolVersion) + " " + c.subcommand + " seed=" + std::to_string(c.seed) + "\n" + o.csv;
  } else {
    body = "intcond " + std::string(kToolVersion) + " " + c.subcommand + " (seed " + std::to_string(c.seed) + ")\n" + o.text;
  }
  if (c.output_path.empty()) {
    out << body;
  } else {
    std::ofstream f(c.output_path);
    if (!f) throw SchemaError("--output", "cannot write " + c.output_path);
    f << body;
  }
}

}  // namespace detail

/// Parse argv and run one subcommand. Reports go to `out` (or --output),
/// diagnostics to `err`.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Intersection condition numbers of projective varieties and linear subspaces", "intcond"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);
  RunConfig c;

  auto common = [&](CLI::App* s) {
    s->add_option("--format", c.format, "json | csv | text")->check(CLI::IsMember({"json", "csv", "text"}));
    s->add_option("--output,-o", c.output_path, "write the report here instead of stdout");
    s->add_option("--seed", c.seed, "RNG seed (echoed in every report)");
    s->add_option("--angle-tol", c.angle_tol, "minimum angle (radians) at or below which kappa = inf");
    s->add_option("--residual-tol", c.residual_tol, "relative residual for z in Z");
  };
  auto linear = [&](CLI::App* s) {
    s->add_option("--subspace,--line,--hyperplane", c.subspace_path, "linear space JSON");
    s->add_option("--kernel", c.kernel_path, "matrix A JSON, L = ker A");
    s->add_option("--image", c.image_path, "matrix B JSON, L = im B");
  };

  auto* inter = app.add_subcommand("intersect", "Z cap L with multiplicities and transversality flags");
  common(inter);
  inter->add_option("--variety", c.variety_path, "variety JSON")->required();
  linear(inter);

  auto* kap = app.add_subcommand("kappa", "condition report for (Z, L)");
  common(kap);
  kap->add_option("--variety", c.variety_path, "variety JSON")->required();
  linear(kap);
  kap->add_option("--point", c.point_path, "restrict to this point of Z cap L");
  kap->add_option("--method", c.method, "angle | nmatrix | cnt | fd-kernel | fd-image | all");
  kap->add_option("--fd-step", c.fd_step, "finite-difference step in [1e-7, 1e-4]");

  auto* trk = app.add_subcommand("track", "continue a witness set along a path of linear spaces");
  common(trk);
  trk->add_option("--variety", c.variety_path, "variety JSON")->required();
  trk->add_option("--path", c.path_path, "path JSON {waypoints: [linear space, ...]}")->required();
  trk->add_option("--start", c.point_path, "start points JSON (default: Z cap L(0))");
  trk->add_option("--steps", c.steps, "base number of steps");

  auto* vol = app.add_subcommand("volumes", "volume and degree table");
  common(vol);
  vol->add_option("--n", c.n, "ambient projective dimension")->required();
  vol->add_option("--m", c.m, "dimension of Z")->required();
  vol->add_option("--deg", c.deg, "degree of Z (default: 2, 3, 4)");
  vol->add_option("--genus", c.genus, "sectional genus");
  vol->add_option("--kind", c.kind, "plane_curve | hypersurface | rational_curve");
  vol->add_flag("--singular", c.assert_singular, "Z has singular points (warns for curves)");

  auto* tail = app.add_subcommand("tail", "Monte Carlo tail of kappa over uniform L");
  common(tail);
  tail->add_option("--variety", c.variety_path, "variety JSON")->required();
  tail->add_option("--samples", c.samples, "number of random subspaces");
  tail->add_option("--eps", c.eps, "eps grid (default 0.02 0.05 0.1 0.2)");
  tail->add_option("--threads", c.threads, "worker threads");
  tail->add_option("--bootstrap", c.bootstrap, "bootstrap replicates for the slope interval");
  tail->add_option("--raw-csv", c.raw_csv_path, "write raw kappa samples");
  tail->add_option("--plot-data", c.plot_data_path, "write (eps, empirical, predicted) triples");
  tail->add_option("--deg", c.deg, "override deg Z");
  tail->add_option("--genus", c.genus, "override the sectional genus");
  tail->add_option("--kind", c.kind, "plane_curve | hypersurface | rational_curve");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  c.subcommand = app.get_subcommands().front()->get_name();

  try {
    Outcome o;
    if (c.subcommand == "intersect") o = detail::run_intersect(c);
    else if (c.subcommand == "kappa") o = detail::run_kappa(c);
    else if (c.subcommand == "track") o = detail::run_track(c);
    else if (c.subcommand == "volumes") o = detail::run_volumes(c);
    else o = detail::run_tail(c);
    detail::emit(c, o, out);
    return o.code;
  } catch (const SchemaError& e) {
    err << "schema error at " << e.what() << "\n";
    return kUsage;
  } catch (const IllPosedError& e) {
    err << "ill-posed (" << to_string(e.reason()) << "): " << e.what() << "\n";
    return kIllPosed;
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace intcond::cli
