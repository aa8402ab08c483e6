// Monte Carlo tail of kappa over uniformly random lines for a plane curve,
// next to the first-order tube model.
//   demo_tail_experiment [degree] [samples] [seed]

#include <cstdio>
#include <cstdlib>
#include <thread>

#include "intcond/intcond.hpp"

int main(int argc, char** argv) {
  using namespace intcond;
  const int d = argc > 1 ? std::atoi(argv[1]) : 2;
  const std::size_t n = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 20000;
  const std::uint64_t seed = argc > 3 ? std::strtoull(argv[3], nullptr, 10) : 1;
  if (d < 2) {
    std::fprintf(stderr, "degree must be >= 2\n");
    return 1;
  }

  // Fermat curve x0^d + x1^d + x2^d
  const Variety z = Variety::hypersurface(
      HomogeneousPoly(3, d, {{{d, 0, 0}, 1.0}, {{0, d, 0}, 1.0}, {{0, 0, d}, 1.0}}));
  SampleOptions opt;
  opt.threads = std::max(1u, std::thread::hardware_concurrency());
  const KappaSamples ks = sample_kappa(z, n, seed, opt);
  const HurwitzParams hp{d, sectional_genus(SectionalKind::plane_curve, d), 1, 1};
  const TailEstimate te = tail_estimate(ks, hp, {0.02, 0.05, 0.1, 0.2, 0.4});

  std::printf("Fermat curve of degree %d, %zu samples, seed %llu\n", d, te.sample_count,
              static_cast<unsigned long long>(seed));
  std::printf("%6s %12s %24s %12s\n", "eps", "empirical", "95% interval", "tube model");
  for (std::size_t i = 0; i < te.eps_grid.size(); ++i) {
    const auto& p = te.empirical_tail[i];
    std::printf("%6.2f %12.6f   [%9.6f, %9.6f] %12.6f\n", te.eps_grid[i], p.estimate, p.ci.lo, p.ci.hi,
                te.predicted_tail[i]);
  }
  std::printf("log-log slope %.3f, 95%% bootstrap [%.3f, %.3f]\n", te.slope.slope, te.slope.ci.lo, te.slope.ci.hi);
  std::printf("mean log kappa %.4f [%.4f, %.4f]\n", te.mean_log_kappa, te.mean_log_kappa_ci.lo,
              te.mean_log_kappa_ci.hi);
}
