#include "pch.hpp"
#include "support.hpp"

using namespace intcond;
using namespace intcond::testing_support;

namespace {

// For each point of a, the distance to the nearest point of b (max over a).
double set_distance(const std::vector<ProjPoint>& a, const std::vector<ProjPoint>& b) {
  double worst = 0.0;
  for (const auto& p : a) {
    double best = kInf;
    for (const auto& q : b) best = std::min(best, chordal_distance(p.coords(), q.coords()));
    worst = std::max(worst, best);
  }
  return worst;
}

SubspacePath conic_path(std::initializer_list<cplx> from, std::initializer_list<cplx> to) {
  return SubspacePath{{row(from), row(to)}};
}

}  // namespace

TEST(LineHypersurface, ConicOrthogonalLine) {
  const IntersectionSet w = line_hypersurface(conic(), Subspace::kernel_of(row({0, 1, 0})));
  ASSERT_EQ(w.size(), 2u);
  EXPECT_EQ(w.total_multiplicity(), 2);
  EXPECT_LT(set_distance(w.points, {ProjPoint(vec({1, 0, 0})), ProjPoint(vec({0, 0, 1}))}), 1e-12);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_TRUE(w.transversal[i]);
    EXPECT_LT(w.residuals[i], 1e-14);
  }
}

TEST(LineHypersurface, TangentLineGivesDoublePoint) {
  const IntersectionSet w = line_hypersurface(conic(), Subspace::kernel_of(row({0, 0, 1})));
  ASSERT_EQ(w.size(), 1u);
  EXPECT_EQ(w.multiplicities[0], 2);
  EXPECT_FALSE(w.transversal[0]);
  EXPECT_LT(chordal_distance(w.points[0].coords(), vec({1, 0, 0})), 1e-6);
}

TEST(LineHypersurface, HyperplaneMeetsLineOnce) {
  const IntersectionSet w = line_hypersurface(hyperplane(vec({1, 1, 1})), Subspace::coordinate(3, {0, 1}));
  ASSERT_EQ(w.size(), 1u);
  EXPECT_LT(chordal_distance(w.points[0].coords(), vec({1, -1, 0})), 1e-12);
  EXPECT_TRUE(w.transversal[0]);
}

TEST(LineHypersurface, LineInsideZIsPositiveDimensional) {
  try {
    line_hypersurface(hyperplane(vec({0, 0, 1})), Subspace::coordinate(3, {0, 1}));
    FAIL();
  } catch (const IllPosedError& e) {
    EXPECT_EQ(e.reason(), IllPosedReason::positive_dimensional);
  }
}

TEST(LineHypersurface, RejectsWrongShapes) {
  EXPECT_THROW(line_hypersurface(conic(), Subspace::coordinate(3, {0})), DomainError);
  EXPECT_THROW(line_hypersurface(twisted_cubic(), Subspace::coordinate(4, {0, 1})), CapabilityError);
}

TEST(HyperplaneCurve, TwistedCubicExamples) {
  const IntersectionSet w = hyperplane_curve(twisted_cubic(), Subspace::kernel_of(row({0, 0, 0, 1})));
  ASSERT_EQ(w.size(), 1u);
  EXPECT_EQ(w.multiplicities[0], 3);
  EXPECT_LT(chordal_distance(w.points[0].coords(), vec({1, 0, 0, 0})), 1e-4);

  const IntersectionSet w3 = hyperplane_curve(twisted_cubic(), Subspace::kernel_of(row({1, 0, 0, -1})));
  ASSERT_EQ(w3.size(), 3u);
  std::vector<ProjPoint> expect;
  for (int k = 0; k < 3; ++k) {
    const cplx t = std::polar(1.0, 2 * std::numbers::pi * k / 3);
    expect.emplace_back(vec({1.0, t, t * t, t * t * t}));
  }
  EXPECT_LT(set_distance(w3.points, expect), 1e-10);
  EXPECT_LT(set_distance(expect, w3.points), 1e-10);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_TRUE(w3.transversal[i]);
}

TEST(Newton, ExactRootIsFixed) {
  const CMat a = row({0, 1, -1});
  const ProjPoint z(vec({1, 0, 0}));
  const NewtonResult r = newton_refine(conic(), a, z);
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.iterations, 1);
  EXPECT_LT(chordal_distance(r.point.coords(), z.coords()), 1e-15);
}

TEST(Newton, QuadraticConvergenceFromPerturbedStart) {
  const CMat a = row({0, 1, -1});
  const ProjPoint z(vec({1, 0, 0}));
  const ProjPoint start(vec({1, 1e-3, cplx(0, 1e-3)}));
  const NewtonResult r = newton_refine(conic(), a, start);
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.iterations, 5);
  EXPECT_LT(chordal_distance(r.point.coords(), z.coords()), 1e-12);
  const NewtonResult again = newton_refine(conic(), a, r.point);
  EXPECT_LT(chordal_distance(again.point.coords(), r.point.coords()), 1e-14);
}

TEST(Newton, TangentStartIsNontransversal) {
  try {
    newton_refine(conic(), row({0, 0, 1}), ProjPoint(vec({1, 0, 0})));
    FAIL();
  } catch (const IllPosedError& e) {
    EXPECT_EQ(e.reason(), IllPosedReason::nontransversal);
  }
}

TEST(Newton, CurveBranch) {
  const Variety c = twisted_cubic();
  const CMat a = row({1, 0, 0, -1});
  const ProjPoint start(vec({1.0, 1.001, 1.0, 0.999}));
  const NewtonResult r = newton_refine(c, a, start);
  EXPECT_TRUE(r.converged);
  EXPECT_LT(chordal_distance(r.point.coords(), vec({1, 1, 1, 1})), 1e-12);
}

TEST(Intersect, GenericLinesMeetConicTwice) {
  std::mt19937_64 rng(17);
  int bad = 0;
  for (int i = 0; i < 1000; ++i) {
    const Subspace l = sample_uniform(3, 2, rng);
    const IntersectionSet w = line_hypersurface(conic(), l);
    if (w.size() != 2 || w.total_multiplicity() != 2) ++bad;
    for (std::size_t k = 0; k < w.size(); ++k) EXPECT_LT(w.residuals[k], 1e-10);
  }
  EXPECT_EQ(bad, 0);
}

TEST(Intersect, GenericHyperplanesMeetTwistedCubicThrice) {
  std::mt19937_64 rng(18);
  for (int i = 0; i < 200; ++i) {
    const Subspace h = sample_uniform(4, 3, rng);
    const IntersectionSet w = hyperplane_curve(twisted_cubic(), h);
    EXPECT_EQ(w.size(), 3u);
    for (std::size_t k = 0; k < w.size(); ++k) EXPECT_LT(w.residuals[k], 1e-10);
  }
}

TEST(Track, ConstantPathKeepsPoints) {
  const CMat a = row({0, 1, -1});
  const SubspacePath path{{a, a}};
  const IntersectionSet start = line_hypersurface(conic(), Subspace::kernel_of(a));
  const IntersectionSet end = track_witness(conic(), path, start, 8);
  EXPECT_LT(set_distance(end.points, start.points), 1e-12);
  EXPECT_LT(set_distance(start.points, end.points), 1e-12);
}

TEST(Track, EndpointsMatchDirectSolve) {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 10; ++trial) {
    const CMat a0 = gaussian_matrix(1, 3, rng);
    const CMat a1 = a0 + 0.2 * gaussian_matrix(1, 3, rng);
    const IntersectionSet start = line_hypersurface(conic(), Subspace::kernel_of(a0));
    const IntersectionSet end = track_witness(conic(), SubspacePath{{a0, a1}}, start, 10);
    const IntersectionSet direct = line_hypersurface(conic(), Subspace::kernel_of(a1));
    EXPECT_LT(set_distance(end.points, direct.points), 1e-8);
    EXPECT_LT(set_distance(direct.points, end.points), 1e-8);
  }
}

TEST(Track, LoopPermutesWitnessPoints) {
  // x2 = c x0 with c circling the origin: the two points (1 : +-sqrt(c) : c)
  // are exchanged after one loop, so the set comes back but not pointwise.
  SubspacePath path;
  for (int k = 0; k <= 16; ++k) {
    const cplx c = 0.5 * std::polar(1.0, 2 * std::numbers::pi * k / 16);
    path.waypoints.push_back(row({-c, 0, 1}));
  }
  const IntersectionSet start = line_hypersurface(conic(), path.subspace_at(0.0));
  ASSERT_EQ(start.size(), 2u);
  const IntersectionSet end = track_witness(conic(), path, start, 64);
  EXPECT_LT(set_distance(end.points, start.points), 1e-6);
  EXPECT_LT(set_distance(start.points, end.points), 1e-6);
  EXPECT_GT(chordal_distance(end.points[0].coords(), start.points[0].coords()), 0.1);
}

TEST(Track, TangentCrossingFails) {
  const SubspacePath path = conic_path({1, 0, 1}, {-1, 0, 1});
  const IntersectionSet start = line_hypersurface(conic(), path.subspace_at(0.0));
  try {
    track_witness(conic(), path, start, 16);
    FAIL();
  } catch (const PathFailure& e) {
    EXPECT_NEAR(e.t(), 0.5, 0.05);
    EXPECT_GT(e.local_kappa(), 100.0);
  }
}
