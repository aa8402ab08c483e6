#pragma once

// Monte Carlo tail probabilities of kappa_Z(L) for uniform L, and the
// first-order tube model (vol Sigma / vol G) * pi * eps^2.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "intcond/condition.hpp"
#include "intcond/volume.hpp"

namespace intcond {

/// splitmix64 finalizer. Sample i of a run with master seed s uses the
/// stream seeded by splitmix64(s + i * golden), so results do not depend on
/// the thread count or scheduling.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::uint64_t sample_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master + index * 0x9E3779B97F4A7C15ULL);
}

struct SampleOptions {
  unsigned threads = 1;
  double audit_fraction = 0.01;
  double max_failure_rate = 0.01;
  ConditionOptions condition{};
};

struct KappaSamples {
  std::vector<double> kappa;        // index order; +inf for ill-posed draws
  std::size_t ill_posed_hits = 0;
  std::size_t failures = 0;         // numerical failures (excluded from kappa)
  std::size_t audited = 0;
  double audit_max_rel_diff = 0.0;  // angle route vs Schubert-distance route
  std::uint64_t seed = 0;
};

namespace detail {

struct OneSample {
  double kappa = kInf;
  bool failed = false;
  bool audited = false;
  double audit_diff = 0.0;
};

inline OneSample draw_one(const Variety& z_var, std::uint64_t seed, double audit_fraction, const ConditionOptions& opt) {
  OneSample out;
  std::mt19937_64 rng(seed);
  const Subspace l = sample_uniform(z_var.ambient_dim(), z_var.codim() + 1, rng);
  const bool audit = std::uniform_real_distribution<double>(0.0, 1.0)(rng) < audit_fraction;
  try {
    const ConditionReport rep = kappa_global(z_var, l, opt, audit);
    out.kappa = rep.kappa_global;
    if (audit && std::isfinite(out.kappa)) {
      out.audited = true;
      for (const auto& pc : rep.per_point)
        out.audit_diff = std::max(out.audit_diff, std::abs(pc.kappa_cnt - pc.kappa_angle) / pc.kappa_angle);
    }
  } catch (const NumericalFailure&) {
    out.failed = true;
  }
  return out;
}

}  // namespace detail

/// n_samples uniform L in G(codim Z + 1, C^(n+1)), each mapped to kappa_Z(L).
inline KappaSamples sample_kappa(const Variety& z_var, std::size_t n_samples, std::uint64_t seed,
                                 const SampleOptions& opt = {}) {
  std::vector<detail::OneSample> raw(n_samples);
  const unsigned threads = std::max(1u, std::min<unsigned>(opt.threads, static_cast<unsigned>(std::max<std::size_t>(n_samples, 1))));
  auto work = [&](unsigned t) {
    for (std::size_t i = t; i < n_samples; i += threads)
      raw[i] = detail::draw_one(z_var, sample_seed(seed, i), opt.audit_fraction, opt.condition);
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }

  KappaSamples out;
  out.seed = seed;
  out.kappa.reserve(n_samples);
  for (const auto& r : raw) {
    if (r.failed) {
      ++out.failures;
      continue;
    }
    out.kappa.push_back(r.kappa);
    if (!std::isfinite(r.kappa)) ++out.ill_posed_hits;
    if (r.audited) {
      ++out.audited;
      out.audit_max_rel_diff = std::max(out.audit_max_rel_diff, r.audit_diff);
    }
  }
  if (n_samples > 0 && static_cast<double>(out.failures) > opt.max_failure_rate * static_cast<double>(n_samples))
    throw NumericalFailure("sample_kappa: " + std::to_string(out.failures) + " of " + std::to_string(n_samples) +
                           " draws failed numerically (limit " + std::to_string(opt.max_failure_rate * 100) + "%)");
  return out;
}

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct TailPoint {
  double estimate = 0.0;
  Interval ci{};  // Wilson 95%
  std::size_t hits = 0;
};

/// Wilson score interval at 95% for k successes out of n.
inline Interval wilson_interval(std::size_t k, std::size_t n) {
  if (n == 0) throw DomainError("wilson_interval: no samples");
  constexpr double z = 1.959963984540054;
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(k) / nn;
  const double denom = 1.0 + z * z / nn;
  const double centre = (p + z * z / (2 * nn)) / denom;
  const double half = z * std::sqrt(p * (1 - p) / nn + z * z / (4 * nn * nn)) / denom;
  return {k == 0 ? 0.0 : std::max(0.0, centre - half), k == n ? 1.0 : std::min(1.0, centre + half)};
}

/// Fraction of samples with kappa >= 1/eps.
inline TailPoint tail_probability(const std::vector<double>& samples, double eps) {
  if (samples.empty()) throw DomainError("tail_probability: empty sample set");
  if (!(eps > 0.0 && eps <= 1.0)) throw DomainError("tail_probability: eps must lie in (0, 1]");
  const double thresh = 1.0 / eps;
  TailPoint t;
  t.hits = static_cast<std::size_t>(
      std::count_if(samples.begin(), samples.end(), [&](double k) { return k >= thresh; }));
  t.estimate = static_cast<double>(t.hits) / static_cast<double>(samples.size());
  t.ci = wilson_interval(t.hits, samples.size());
  return t;
}

/// First-order tube model (vol Sigma / vol G) * pi * eps^2, clipped to [0, 1].
/// A reference model, not a bound.
inline double predicted_tail(const HurwitzParams& p, double eps) {
  if (eps < 0.0) throw DomainError("predicted_tail: eps must be >= 0");
  return std::clamp(hurwitz_vol_ratio(p) * std::numbers::pi * eps * eps, 0.0, 1.0);
}

struct ExpectationReport {
  double mean_kappa_trimmed = 0.0;  // top 0.1% winsorized
  double mean_kappa_raw = 0.0;
  double mean_log_kappa = 0.0;
  Interval mean_log_kappa_ci{};     // normal approximation, 95%
  bool jensen_gap_ok = true;        // mean log kappa <= log mean kappa
  bool winsorized = false;
};

inline ExpectationReport expectation_report(const std::vector<double>& samples) {
  std::vector<double> s;
  for (double k : samples)
    if (std::isfinite(k)) s.push_back(k);
  if (s.size() < 100) throw DomainError("expectation_report: need at least 100 finite samples");
  std::sort(s.begin(), s.end());  // sorted so sums are independent of sample order
  const std::size_t n = s.size();
  ExpectationReport r;
  double sum_log = 0.0, sum_log2 = 0.0, sum = 0.0;
  for (double k : s) {
    const double lk = std::log(k);
    sum_log += lk;
    sum_log2 += lk * lk;
    sum += k;
  }
  const double nn = static_cast<double>(n);
  r.mean_log_kappa = sum_log / nn;
  r.mean_kappa_raw = sum / nn;
  const double var = std::max(0.0, (sum_log2 - nn * r.mean_log_kappa * r.mean_log_kappa) / (nn - 1));
  const double half = 1.959963984540054 * std::sqrt(var / nn);
  r.mean_log_kappa_ci = {r.mean_log_kappa - half, r.mean_log_kappa + half};

  const std::size_t cut = n / 1000;
  std::vector<double> w = s;
  if (cut > 0) {
    const double cap = w[n - cut - 1];
    for (std::size_t i = n - cut; i < n; ++i) w[i] = cap;
    r.winsorized = true;
  }
  r.mean_kappa_trimmed = std::accumulate(w.begin(), w.end(), 0.0) / nn;
  r.jensen_gap_ok = r.mean_log_kappa <= std::log(r.mean_kappa_raw) + 1e-12;
  return r;
}

struct SlopeFit {
  double slope = std::nan("");
  Interval ci{std::nan(""), std::nan("")};  // 95% bootstrap percentile interval
  std::size_t points_used = 0;
};

namespace detail {

inline double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

// Least-squares slope of log(tail) against log(eps) over the eps values with
// a nonzero tail; NaN if fewer than two remain.
inline SlopeFit fit_on(const std::vector<double>& samples, const std::vector<double>& eps_grid) {
  std::vector<double> x, y;
  for (double e : eps_grid) {
    const double t = tail_probability(samples, e).estimate;
    if (t > 0.0) {
      x.push_back(std::log(e));
      y.push_back(std::log(t));
    }
  }
  SlopeFit f;
  f.points_used = x.size();
  if (x.size() >= 2) f.slope = ls_slope(x, y);
  return f;
}

}  // namespace detail

/// log-log slope of the empirical tail with a bootstrap interval.
inline SlopeFit tail_slope(const std::vector<double>& samples, const std::vector<double>& eps_grid,
                           std::uint64_t seed, int bootstrap = 200) {
  SlopeFit f = detail::fit_on(samples, eps_grid);
  if (std::isnan(f.slope) || bootstrap <= 0) return f;
  std::mt19937_64 rng(splitmix64(seed ^ 0xB007B007ULL));
  std::uniform_int_distribution<std::size_t> pick(0, samples.size() - 1);
  std::vector<double> slopes;
  std::vector<double> resample(samples.size());
  for (int b = 0; b < bootstrap; ++b) {
    for (auto& v : resample) v = samples[pick(rng)];
    const SlopeFit fb = detail::fit_on(resample, eps_grid);
    if (!std::isnan(fb.slope)) slopes.push_back(fb.slope);
  }
  if (slopes.size() >= 10) {
    std::sort(slopes.begin(), slopes.end());
    const auto q = [&](double p) { return slopes[static_cast<std::size_t>(p * static_cast<double>(slopes.size() - 1))]; };
    f.ci = {q(0.025), q(0.975)};
  }
  return f;
}

struct TailEstimate {
  std::vector<double> eps_grid;
  std::vector<TailPoint> empirical_tail;
  std::vector<double> predicted_tail;  // model
  std::size_t sample_count = 0;
  std::uint64_t seed = 0;
  double mean_log_kappa = 0.0;
  Interval mean_log_kappa_ci{};
  std::size_t ill_posed_hits = 0;
  std::size_t failures = 0;
  std::size_t audited = 0;
  double audit_max_rel_diff = 0.0;
  SlopeFit slope{};
};

inline std::vector<double> default_eps_grid() { return {0.02, 0.05, 0.1, 0.2}; }

inline TailEstimate tail_estimate(const KappaSamples& ks, const HurwitzParams& p, std::vector<double> eps_grid,
                                  int bootstrap = 200) {
  if (ks.kappa.empty()) throw DomainError("tail_estimate: no samples");
  std::sort(eps_grid.begin(), eps_grid.end());
  TailEstimate t;
  t.eps_grid = eps_grid;
  t.sample_count = ks.kappa.size();
  t.seed = ks.seed;
  t.ill_posed_hits = ks.ill_posed_hits;
  t.failures = ks.failures;
  t.audited = ks.audited;
  t.audit_max_rel_diff = ks.audit_max_rel_diff;
  for (double e : eps_grid) {
    t.empirical_tail.push_back(tail_probability(ks.kappa, e));
    t.predicted_tail.push_back(predicted_tail(p, e));
  }
  std::vector<double> finite;
  for (double k : ks.kappa)
    if (std::isfinite(k)) finite.push_back(k);
  if (finite.size() >= 100) {
    const ExpectationReport er = expectation_report(finite);
    t.mean_log_kappa = er.mean_log_kappa;
    t.mean_log_kappa_ci = er.mean_log_kappa_ci;
  }
  t.slope = tail_slope(ks.kappa, eps_grid, ks.seed, bootstrap);
  return t;
}

}  // namespace intcond
