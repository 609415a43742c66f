#include <gtest/gtest.h>

#include <random>

#include "crosscap/crosscap.hpp"
#include "crosscap/parser.hpp"
#include "oracles.hpp"

using namespace crosscap;

namespace {

PolynomialMap eleven_crosscaps_map() {
  return parse_map({"12*y^2+z", "6*x^2+y^2+6*y", "18*x*y+13*y^2+9*x", "8*x^2*z+10*x*z^2+5*x^2+3*x*z",
                    "x^2*y+4*x*y*z+y*z+4*z^2"},
                   make_variables({"x", "y", "z"}));
}

PolynomialMap sphere_map() {
  return parse_map({"-3*y^2+5*y*z-x+2", "-4*x^2+z^2+9*y-6*z+5", "4*x^2*z-2*x^2+2*x*y-y-3",
                    "3*y^2*z+x*y-4*y*z+4*x-5*y-5"},
                   make_variables({"x", "y", "z"}));
}

PolynomialMap whitney3() { return parse_map({"x^2", "y", "z", "x*y", "x*z"}, make_variables({"x", "y", "z"})); }

const CrossCapProblem& eleven_problem() {
  static const CrossCapProblem p = build_problem(eleven_crosscaps_map());
  return p;
}

}  // namespace

TEST(BuildProblem, ShapeErrors) {
  auto v2 = make_variables({"x", "y"});
  EXPECT_THROW(build_problem(parse_map({"x", "y", "x*y"}, v2)), DimensionError);
  auto v3 = make_variables({"x", "y", "z"});
  EXPECT_THROW(build_problem(parse_map({"x", "y", "z", "x*y"}, v3)), DimensionError);
  EXPECT_THROW(build_problem(parse_map({"x", "y*z", "x*x", "y", "z", "z"}, v3)), DimensionError);
}

TEST(BuildProblem, WhitneyAndRegular) {
  CrossCapProblem w = build_problem(whitney3());
  EXPECT_EQ(w.mu.size(), 10u);
  EXPECT_EQ(w.dim_a(), 1u);
  EXPECT_EQ(w.singular_gb.generators.size(), 3u);
  CrossCapProblem r = build_problem(parse_map({"x", "y", "z", "0", "0"}, make_variables({"x", "y", "z"})));
  EXPECT_EQ(r.dim_a(), 0u);
  EXPECT_TRUE(is_unit_ideal(r.singular_gb));
}

TEST(CheckGeneric, ElevenCrossCapsIsGeneric) {
  GenericityReport rep = check_generic(eleven_problem());
  EXPECT_TRUE(rep.rank_drop_empty);
  EXPECT_TRUE(rep.transversal);
  EXPECT_TRUE(rep.generic);
  EXPECT_FALSE(rep.witness.has_value());
}

TEST(CheckGeneric, WhitneyAndRegularAreGeneric) {
  EXPECT_TRUE(check_generic(build_problem(whitney3())).generic);
  EXPECT_TRUE(check_generic(build_problem(parse_map({"x", "y", "z", "0", "0"}, make_variables({"x", "y", "z"}))))
                  .generic);
}

TEST(CheckGeneric, DegenerateMapHasRealWitness) {
  auto v = make_variables({"x", "y", "z"});
  PolynomialMap f = parse_map({"x^3", "y", "z", "x*y", "x*z"}, v);
  GenericityReport rep = check_generic(build_problem(f));
  EXPECT_FALSE(rep.generic);
  EXPECT_FALSE(rep.transversal);
  ASSERT_TRUE(rep.witness.has_value());
  for (double c : *rep.witness) EXPECT_NEAR(c, 0.0, 1e-6);
  // Oracle: Df at the witness has rank m-1 but the minor map is not transverse there.
  EXPECT_EQ(numerical_rank(evaluate(jacobian(f), *rep.witness), 1e-8), 2u);
}

TEST(BuildDelta, ShapesAndExactDelta) {
  const CrossCapProblem& p = eleven_problem();
  DeltaData d = build_delta(p);
  EXPECT_EQ(d.deltas.size(), 3u);
  EXPECT_EQ(d.delta_jacobian.rows(), 3u);
  EXPECT_EQ(d.delta, normal_form(delta_polynomial(d), p.singular_gb));
  // Each Delta_i equals the bordered minor computed by brute force.
  PolyMatrix df = p.df;
  for (std::size_t i = 2; i < 5; ++i) {
    std::vector<std::size_t> rows{0, 1, i}, cols{0, 1, 2};
    EXPECT_EQ(d.deltas[i - 2], oracle::leibniz_determinant(df.select(rows, cols)));
  }
  std::vector<std::size_t> head{0, 1}, tail{1, 2};
  EXPECT_EQ(d.pivot_minor, oracle::leibniz_determinant(df.select(head, tail)));
}

TEST(BuildDelta, DeltaAgreesWithNumericJacobianDeterminant) {
  const CrossCapProblem& p = eleven_problem();
  DeltaData d = build_delta(p);
  Polynomial full = delta_polynomial(d);
  std::vector<Rational> pt{Rational(1, 3), Rational(-2, 5), Rational(3, 7)};
  std::vector<std::vector<Rational>> num(3, std::vector<Rational>(3));
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      num[i][j] = evaluate(d.delta_jacobian(i, j), std::span<const Rational>(pt));
  EXPECT_EQ(evaluate(full, std::span<const Rational>(pt)), oracle::gauss_determinant(num));
}

TEST(Zeta, ElevenCrossCapsBalls) {
  const CrossCapProblem& p = eleven_problem();
  ZetaResult small = zeta(p, Region::ball(p.f.variables, 3));
  EXPECT_EQ(small.zeta, 2);
  EXPECT_EQ((small.sig_delta + small.sig_u_delta) % 2, 0);
  EXPECT_EQ(small.dim_a, 15u);
  EXPECT_EQ(zeta(p, Region::ball(p.f.variables, 100)).zeta, 1);
}

TEST(Zeta, Whitney) {
  CrossCapProblem p = build_problem(whitney3());
  EXPECT_EQ(zeta(p, Region::ball(p.f.variables, 1)).zeta, -1);
  TotalZeta t = total_zeta(p);
  EXPECT_EQ(t.zeta, -1);
  EXPECT_EQ(t.positives, 0);
  EXPECT_EQ(t.negatives, 1);
}

TEST(Zeta, WhitneyNeedsRowTransform) {
  CrossCapProblem p = build_problem(whitney3());
  EXPECT_FALSE(p.trace->generates_unit_ideal({build_delta(p).pivot_minor}));
  try {
    zeta(p, Region::ball(p.f.variables, 1), 0, 0);
    FAIL() << "expected a hypothesis failure";
  } catch (const HypothesisFailure& e) {
    EXPECT_EQ(e.code(), ErrorCode::hypothesis_failure);
    EXPECT_EQ(e.retries(), 0);
  }
}

TEST(Zeta, RegularMapIsZero) {
  CrossCapProblem p = build_problem(parse_map({"x", "y", "z", "0", "0"}, make_variables({"x", "y", "z"})));
  EXPECT_EQ(zeta(p, Region::ball(p.f.variables, 1)).zeta, 0);
  EXPECT_EQ(count_real(p), 0);
}

TEST(Zeta, IndependentOfSeed) {
  const CrossCapProblem& p = eleven_problem();
  Region r = Region::ball(p.f.variables, 3);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    ZetaOptions opt;
    opt.seed = seed;
    EXPECT_EQ(zeta(p, r, opt).zeta, 2);
  }
  CrossCapProblem w = build_problem(whitney3());
  for (std::uint64_t seed = 1; seed <= 5; ++seed) EXPECT_EQ(zeta(w, Region::ball(w.f.variables, 1), seed, 8).zeta, -1);
}

TEST(Zeta, BallPlusAnnulus) {
  const CrossCapProblem& p = eleven_problem();
  const auto& v = p.f.variables;
  long inner = zeta(p, Region::ball(v, 3)).zeta;
  long outer = zeta(p, Region::ball(v, 100)).zeta;
  long ring = zeta(p, Region::annulus(v, 3, 100)).zeta;
  EXPECT_EQ(outer, inner + ring);
}

TEST(Zeta, OracleSignedSumInsideRegion) {
  const CrossCapProblem& p = eleven_problem();
  auto c = classify_all(p.f, p.qa, p.mu, 0);
  for (Rational r2 : {Rational(1), Rational(3), Rational(10), Rational(100)}) {
    long sum = 0;
    for (const auto& cc : c.crosscaps)
      if (linalg::dot(cc.point.coordinates, cc.point.coordinates) < r2.get_d()) sum += cc.sign;
    EXPECT_EQ(zeta(p, Region::ball(p.f.variables, r2)).zeta, sum) << r2;
  }
}

TEST(Zeta, BoundaryHitOnSingularPoint) {
  const CrossCapProblem& p = eleven_problem();
  auto pts = solve_singular_points(p.qa, p.mu, 0);
  ASSERT_FALSE(pts.empty());
  Rational r2(linalg::dot(pts[0].coordinates, pts[0].coordinates));
  EXPECT_THROW(zeta(p, Region::ball(p.f.variables, r2)), BoundaryHit);
  ZetaOptions unchecked;
  unchecked.boundary_check = false;
  EXPECT_NO_THROW(zeta(p, Region::ball(p.f.variables, r2), unchecked));
}

TEST(Region, RejectsBadRadii) {
  auto v = make_variables({"x", "y", "z"});
  EXPECT_THROW(Region::ball(v, 0), DimensionError);
  EXPECT_THROW(Region::annulus(v, 4, 2), DimensionError);
  EXPECT_THROW(Region::annulus(v, 0, 2), DimensionError);
}

TEST(CountReal, Examples) {
  EXPECT_EQ(count_real(eleven_problem()), 11);
  EXPECT_EQ(count_real(build_problem(whitney3())), 1);
}

TEST(TotalZeta, ElevenCrossCaps) {
  TotalZeta t = total_zeta(eleven_problem());
  EXPECT_EQ(t.count, 11);
  EXPECT_EQ(t.zeta, 1);
  EXPECT_EQ(t.positives, 6);
  EXPECT_EQ(t.negatives, 5);
}

TEST(TotalZeta, SphereImmersionAugmentedMap) {
  CrossCapProblem p = build_problem(augmented_map(sphere_map()));
  TotalZeta t = total_zeta(p);
  EXPECT_EQ(t.count, 8);
  EXPECT_EQ(t.positives, 5);
  EXPECT_EQ(t.negatives, 3);
  EXPECT_EQ(t.zeta, 2);
  auto c = classify_all(p.f, p.qa, p.mu, 0);
  EXPECT_EQ(c.totals.count, 8u);
  EXPECT_EQ(c.totals.positives, 5u);
  EXPECT_EQ(c.totals.negatives, 3u);
}

TEST(Immersion, LinearEmbedding) {
  PolynomialMap g = parse_map({"x", "y", "z", "0"}, make_variables({"x", "y", "z"}));
  ImmersionReport rep = immersion_check(g, 4);
  EXPECT_TRUE(rep.immersion);
  EXPECT_TRUE(rep.exact);
  EXPECT_EQ(intersection_number(g, 4), 0);
}

TEST(Immersion, ExactBadRadiusHasWitness) {
  // The singular set of (omega, g) is the single point (0, 1, 0).
  PolynomialMap g = parse_map({"y", "z", "x*(y-1)", "x*z"}, make_variables({"x", "y", "z"}));
  ImmersionReport bad = immersion_check(g, 1);
  EXPECT_FALSE(bad.immersion);
  ASSERT_TRUE(bad.witness.has_value());
  EXPECT_NEAR((*bad.witness)[0], 0.0, 1e-9);
  EXPECT_NEAR((*bad.witness)[1], 1.0, 1e-9);
  EXPECT_NEAR((*bad.witness)[2], 0.0, 1e-9);
  EXPECT_THROW(intersection_number(g, 1), NotImmersion);
  EXPECT_TRUE(immersion_check(g, 2).immersion);
  long jump = intersection_number(g, 2) - intersection_number(g, Rational(1, 2));
  EXPECT_EQ(std::abs(jump), 1);
  EXPECT_EQ(intersection_difference(g, Rational(1, 2), 2), jump);
}

TEST(IntersectionNumber, SphereImmersionLargeRadius) {
  PolynomialMap g = sphere_map();
  CrossCapProblem p = build_problem(augmented_map(g));
  EXPECT_EQ(intersection_number(g, large_radius_squared(p)), 2);
}

TEST(IntersectionNumber, SampledRadiiStayInRange) {
  // Squared norms of the singular points of (omega, g) are about
  // 0.685, 0.868, 1.017, 1.266, 12.6, 22.6, 38.7, 57.9; one radius per gap.
  PolynomialMap g = sphere_map();
  const std::vector<std::pair<Rational, long>> samples{
      {Rational(1, 2), 0},   {Rational(3, 4), -1}, {Rational(19, 20), 0}, {Rational(11, 10), -1}, {Rational(2), 0},
      {Rational(15), 1},     {Rational(30), 0},    {Rational(45), 1},     {Rational(81), 2}};
  for (const auto& [r2, expected] : samples) {
    long value = intersection_number(g, r2);
    EXPECT_EQ(value, expected) << r2;
    EXPECT_GE(value, -3);
    EXPECT_LE(value, 5);
  }
}

TEST(IntersectionNumber, DifferenceMatchesBalls) {
  PolynomialMap g = sphere_map();
  EXPECT_EQ(intersection_difference(g, 2, 12), 0);
  EXPECT_EQ(intersection_difference(g, Rational(1, 2), 81),
            intersection_number(g, 81) - intersection_number(g, Rational(1, 2)));
  EXPECT_EQ(intersection_difference(g, Rational(1, 2), 81), 2);
}

TEST(IntersectionNumber, RadiusWithinToleranceOfSingularPoint) {
  PolynomialMap g = sphere_map();
  CrossCapProblem p = build_problem(augmented_map(g));
  auto pts = solve_singular_points(p.qa, p.mu, 0);
  ASSERT_EQ(pts.size(), 8u);
  Rational r2(linalg::dot(pts[0].coordinates, pts[0].coordinates));
  try {
    intersection_number(g, r2);
    FAIL() << "expected NotImmersion";
  } catch (const NotImmersion& e) {
    EXPECT_EQ(e.code(), ErrorCode::not_immersion);
    ASSERT_EQ(e.witness().size(), 3u);
    EXPECT_NEAR(linalg::norm(e.witness()), std::sqrt(r2.get_d()), 1e-6);
  }
}
