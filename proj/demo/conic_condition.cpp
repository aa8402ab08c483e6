// Condition of Z cap L for the conic x0 x2 = x1^2 and the pencil of lines
// L_t = {x1 = t x2} through (1:0:0), as L_t approaches the tangent x2 = 0.

#include <cstdio>

#include "intcond/intcond.hpp"

int main() {
  using namespace intcond;
  const Variety conic =
      Variety::hypersurface(HomogeneousPoly(3, 2, {{{1, 0, 1}, 1.0}, {{0, 2, 0}, -1.0}}));
  CVec e0 = CVec::Zero(3);
  e0(0) = 1.0;
  const ProjPoint z(e0);

  // kercond_fd is marked * when the h / (h/2) Richardson check fails: close to
  // the tangent the solution map curves on a scale 1/kappa^2 and the default
  // step is no longer small.
  std::printf("%8s %14s %14s %14s %15s %14s\n", "t", "angle", "N-matrix", "Schubert", "kercond_fd", "kappa_global");
  for (double t : {0.0, 0.5, 1.0, 2.0, 5.0, 20.0, 100.0}) {
    CMat a(1, 3);
    a << 0.0, 1.0, -t;
    const Subspace l = Subspace::kernel_of(a);
    const double k_angle = kappa_point(conic, l, z);
    const double k_n = kappa_point_via_n(conic, l, z);
    const double k_cnt = kappa_point_via_cnt(conic, l, z).kappa;
    const FdCondition fd = kercond_fd(conic, a, z);
    const double k_glob = kappa_global_value(conic, l);
    std::printf("%8.2f %14.8f %14.8f %14.8f %14.8f%c %14.8f\n", t, k_angle, k_n, k_cnt, fd.value,
                fd.richardson_ok ? ' ' : '*', k_glob);
  }

  CMat tangent(1, 3);
  tangent << 0.0, 0.0, 1.0;
  const ConditionReport r = kappa_global(conic, Subspace::kernel_of(tangent));
  std::printf("tangent line: kappa = %g (%s)\n", r.kappa_global, std::string(to_string(r.ill_posed_reason)).c_str());
}
