#include "pch.hpp"
#include "support.hpp"

using namespace intcond;
using namespace intcond::testing_support;

namespace {

const ProjPoint kE0(vec({1, 0, 0}));

CMat conic_basis_b() {
  CMat b(3, 2);
  b << 1, 0, 0, 1 / std::sqrt(2.0), 0, 1 / std::sqrt(2.0);
  return b;
}

}  // namespace

TEST(KappaPoint, ConicExamples) {
  const Variety c = conic();
  EXPECT_NEAR(kappa_point(c, Subspace::kernel_of(row({0, 1, 0})), kE0), 1.0, 1e-12);
  EXPECT_NEAR(kappa_point(c, Subspace::kernel_of(row({0, 1, -1})), kE0), std::sqrt(2.0), 1e-12);
  EXPECT_TRUE(std::isinf(kappa_point(c, Subspace::kernel_of(row({0, 0, 1})), kE0)));
  EXPECT_NEAR(kappa_point_via_n(c, Subspace::kernel_of(row({0, 1, -1})), kE0), std::sqrt(2.0), 1e-12);
  EXPECT_TRUE(std::isinf(kappa_point_via_n(c, Subspace::kernel_of(row({0, 0, 1})), kE0)));
}

TEST(KappaPoint, RequiresIncidence) {
  EXPECT_THROW(kappa_point(conic(), Subspace::kernel_of(row({1, 0, 0})), kE0), DomainError);
  EXPECT_THROW(kappa_point(conic(), Subspace::kernel_of(row({0, 1, 0})), ProjPoint(vec({1, 1, 0}))), DomainError);
}

TEST(KappaPoint, SchubertDistanceRoute) {
  const Subspace l = Subspace::kernel_of(row({0, 1, -1}));
  const CntResult r = kappa_point_via_cnt(conic(), l, kE0);
  EXPECT_NEAR(r.kappa, std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(r.d_g, std::numbers::pi / 4, 1e-12);
  EXPECT_NEAR(r.d_p, 1 / std::sqrt(2.0), 1e-12);
  ASSERT_TRUE(r.nearest_ill_posed.has_value());
  // L' must be ill-posed at z: it contains z and is tangent to the conic there.
  const Subspace& lp = *r.nearest_ill_posed;
  EXPECT_LT(lp.relative_residual(kE0.coords()), 1e-12);
  EXPECT_TRUE(std::isinf(local_kappa(conic(), lp, kE0)));
  EXPECT_TRUE(same_span(lp, Subspace::kernel_of(row({0, 0, 1}))));
}

TEST(KappaPoint, MonotoneAlongPencilTowardTangent) {
  // L_t = {x1 = t x2} through (1:0:0): kappa = sqrt(1 + t^2).
  double prev = 0.0;
  for (double t : {0.0, 0.5, 1.0, 2.0, 10.0, 1e3}) {
    const double k = kappa_point(conic(), Subspace::kernel_of(row({0, 1, -t})), kE0);
    EXPECT_NEAR(k, std::sqrt(1 + t * t), 1e-9 * k);
    EXPECT_GT(k, prev);
    prev = k;
  }
}

TEST(KappaGlobal, Reasons) {
  const ConditionReport ok = kappa_global(conic(), Subspace::kernel_of(row({0, 1, 0})));
  EXPECT_EQ(ok.ill_posed_reason, IllPosedReason::none);
  EXPECT_NEAR(ok.kappa_global, 1.0, 1e-12);
  ASSERT_EQ(ok.per_point.size(), 2u);

  const ConditionReport tan = kappa_global(conic(), Subspace::kernel_of(row({0, 0, 1})));
  EXPECT_EQ(tan.ill_posed_reason, IllPosedReason::nontransversal);
  EXPECT_TRUE(std::isinf(tan.kappa_global));

  const ConditionReport inside = kappa_global(hyperplane(vec({0, 0, 1})), Subspace::coordinate(3, {0, 1}));
  EXPECT_EQ(inside.ill_posed_reason, IllPosedReason::positive_dimensional);
  EXPECT_TRUE(std::isinf(inside.kappa_global));

  const ConditionReport node = kappa_global(nodal_cubic(), Subspace::kernel_of(row({1, -1, 0})));
  EXPECT_EQ(node.ill_posed_reason, IllPosedReason::singular_point);
  EXPECT_TRUE(std::isinf(node.kappa_global));
}

TEST(KappaGlobal, WitnessOverloadForCurves) {
  const Subspace h = Subspace::kernel_of(row({1, 0, 0, -1}));
  const IntersectionSet w = hyperplane_curve(twisted_cubic(), h);
  const ConditionReport a = kappa_global(twisted_cubic(), h);
  const ConditionReport b = kappa_global(twisted_cubic(), h, w.points);
  EXPECT_NEAR(a.kappa_global, b.kappa_global, 1e-12 * a.kappa_global);
  for (const auto& pc : a.per_point) {
    EXPECT_LT(rel(pc.kappa_angle, pc.kappa_nmatrix), 1e-8);
    EXPECT_LT(rel(pc.kappa_angle, pc.kappa_cnt), 1e-8);
  }
}

TEST(Kercond, ConicWorkedExample) {
  const FdCondition f = kercond_fd(conic(), row({0, 1, -1}), kE0);
  EXPECT_NEAR(f.value, std::sqrt(2.0), 1e-4);
  EXPECT_TRUE(f.richardson_ok);
  EXPECT_TRUE(f.holomorphic_ok);
  EXPECT_NEAR(conic_kercond_oracle(row({0, 1, -1}), kE0.coords()), std::sqrt(2.0), 1e-4);
}

TEST(Kercond, ScaleInvariance) {
  std::mt19937_64 rng(3);
  const Instance in = random_instance(conic(), rng);
  const CMat a = mixed_kernel_matrix(in.l, 1.0, rng);
  const double k1 = kercond_fd(conic(), a, in.z).value;
  const double k2 = kercond_fd(conic(), CMat(cplx(3, 4) * a), in.z).value;
  EXPECT_LT(rel(k1, k2), 1e-6);
}

TEST(Kercond, RejectsBadArguments) {
  EXPECT_THROW(kercond_fd(conic(), row({0, 1, -1}), kE0, 1e-2), DomainError);
  EXPECT_THROW(kercond_fd(conic(), CMat::Identity(2, 3), kE0), DomainError);
  EXPECT_TRUE(std::isinf(kercond_fd(conic(), row({0, 0, 1}), kE0).value));
}

TEST(Kercond, AgreesWithQuadraticFormulaOracle) {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 10; ++i) {
    const Instance in = random_instance(conic(), rng);
    const CMat a = mixed_kernel_matrix(in.l, 1.0, rng);
    const double lib = kercond_fd(conic(), a, in.z).value;
    const double oracle = conic_kercond_oracle(a, in.z.coords());
    EXPECT_LT(rel(lib, oracle), 1e-4);
    EXPECT_LT(rel(lib, kappa_point(conic(), in.l, in.z)), 1e-4);
  }
}

TEST(Imcond, OrthonormalColumnsGiveKappa) {
  const FdCondition f = imcond_fd(conic(), conic_basis_b(), kE0);
  EXPECT_NEAR(f.value, std::sqrt(2.0), 1e-4);
  CMat scaled = conic_basis_b();
  scaled.col(1) *= 5.0;
  const double k = imcond_fd(conic(), scaled, kE0).value;
  EXPECT_GE(k, std::sqrt(2.0) * (1 - 1e-3));
  EXPECT_LE(k, 5.0 * std::sqrt(2.0) * (1 + 1e-3));
}

TEST(Imcond, KernelImageDuality) {
  // Quadric surface: B is 4 x 2, A = B^T is 2 x 4. im B and ker B^T are
  // different lines, each with its own sandwich.
  std::mt19937_64 rng(12);
  const Variety q = quadric_surface();
  for (int trial = 0; trial < 5; ++trial) {
    const CMat b = gaussian_matrix(4, 2, rng);
    const CMat a = b.transpose();
    const double cb = matrix_condition(b);
    const Subspace lim = Subspace::span_of(b);
    const Subspace lker = Subspace::kernel_of(a);
    for (const ProjPoint& z : intersect(q, lim).points) {
      const double k = kappa_point(q, lim, z);
      const double ic = imcond_fd(q, b, z).value;
      EXPECT_TRUE(std::isfinite(ic));
      EXPECT_GE(ic, k - 1e-3 * cb * k);
      EXPECT_LE(ic, cb * k + 1e-3 * cb * k);
    }
    for (const ProjPoint& z : intersect(q, lker).points) {
      const double k = kappa_point(q, lker, z);
      const double kc = kercond_fd(q, a, z).value;
      EXPECT_TRUE(std::isfinite(kc));
      EXPECT_GE(kc, k - 1e-3 * cb * k);
      EXPECT_LE(kc, cb * k + 1e-3 * cb * k);
    }
  }
}

TEST(GrassmannMapNorms, Examples) {
  CMat b = CMat::Zero(3, 2);
  b(0, 0) = 1;
  b(1, 1) = 1;
  GrassmannMapNorms g = grassmann_map_norms_fd(b);
  EXPECT_NEAR(g.im_norm, 1.0, 1e-4);
  EXPECT_NEAR(g.ker_norm, 1.0, 1e-4);
  b(0, 0) = 2;
  g = grassmann_map_norms_fd(b);
  EXPECT_NEAR(g.im_norm, 1.0, 1e-4);
  b(0, 0) = 1;
  b(1, 1) = 0.25;
  g = grassmann_map_norms_fd(b);
  for (double v : {g.im_norm, g.ker_norm, g.im_norm_dg, g.ker_norm_dg}) EXPECT_NEAR(v, 4.0, 1e-3);
  EXPECT_THROW(grassmann_map_norms_fd(CMat::Identity(2, 2)), DomainError);
}

class ConditionProperties : public ::testing::TestWithParam<int> {};

TEST_P(ConditionProperties, MethodsAgreeAndKappaAtLeastOne) {
  std::mt19937_64 rng(GetParam());
  for (const Variety& v : {conic(), klein_quartic(), quadric_surface(), twisted_cubic()}) {
    for (int i = 0; i < 5; ++i) {
      const Instance in = random_instance(v, rng);
      const ConditionReport r = kappa_global(v, in.l, in.witness.points);
      EXPECT_GE(r.kappa_global, 1.0);
      for (const auto& pc : r.per_point) {
        EXPECT_GE(pc.kappa_angle, 1.0);
        EXPECT_LT(rel(pc.kappa_angle, pc.kappa_nmatrix), 1e-6);
        EXPECT_LT(rel(pc.kappa_angle, pc.kappa_cnt), 1e-6);
        EXPECT_NEAR(pc.dist_p_local_schubert, std::sin(pc.dist_g_local_schubert), 1e-10);
      }
    }
  }
}

TEST_P(ConditionProperties, UnitaryInvariance) {
  std::mt19937_64 rng(GetParam());
  // kappa(Z, L, z) = kappa(UZ, UL, Uz) for the conic moved by a unitary U;
  // the moved conic is the quadric z^T U^-T M U^-1 z.
  const CMat u = random_unitary(3, rng);
  Eigen::Matrix3cd m = Eigen::Matrix3cd::Zero();
  m(0, 2) = m(2, 0) = 0.5;
  m(1, 1) = -1;
  const CMat ui = u.adjoint();
  const CMat mu = ui.transpose() * m * ui;
  std::map<std::vector<int>, cplx> terms;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      std::vector<int> e(3, 0);
      ++e[i];
      ++e[j];
      terms[e] += mu(i, j);
    }
  const Variety moved = Variety::hypersurface(HomogeneousPoly(3, 2, terms));
  for (int i = 0; i < 5; ++i) {
    const Instance in = random_instance(conic(), rng);
    const double k = kappa_point(conic(), in.l, in.z);
    const Subspace ul = Subspace::span_of(CMat(u * in.l.basis()));
    const ProjPoint uz(CVec(u * in.z.coords()));
    EXPECT_LT(rel(kappa_point(moved, ul, uz), k), 1e-8);
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, ConditionProperties, ::testing::Values(5, 6, 7));
