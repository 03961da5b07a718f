#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "dirac/comparison.hpp"
#include "oracles.hpp"

using namespace dirac;

namespace {

AngularSector s3() { return AngularSector(3, HalfInteger::from_twice(1), -1); }

ComparisonCase line_case() {
  return ComparisonCase(Problem(1, OneDim{}, family::LaserDressed{0.61362, 0.62}),
                        Problem(1, OneDim{}, family::Exponential{0.8, 0.41}));
}

ComparisonCase coulomb_sech() {
  return ComparisonCase(Problem(1, s3(), family::Coulomb{0.579}),
                        Problem(1, s3(), family::SechSquared{0.3, 0.2}), Base::A);
}

ComparisonCase hulthen_coulomb() {
  return ComparisonCase(Problem(2, s3(), family::Hulthen{0.2, 0.3}),
                        Problem(2, s3(), family::Coulomb{0.508}), Base::B);
}

const TheoremVerdict& pick(const ComparisonReport& r, Theorem t, bool cor) {
  for (const auto& v : r.verdicts)
    if (v.theorem == t && v.corollary == cor) return v;
  throw std::logic_error("missing verdict");
}

double dv_line(double x) {
  return -0.8 * std::exp(-0.41 * x) + 0.61362 / std::sqrt(x * x + 0.62 * 0.62);
}

}  // namespace

TEST(Weights, TheoremTable) {
  EXPECT_EQ(theorem_weights(Theorem::T1), std::vector<WeightKind>{WeightKind::Unit});
  EXPECT_EQ(theorem_weights(Theorem::T5),
            (std::vector<WeightKind>{WeightKind::Psi1RK, WeightKind::NegPsi2RK}));
  EXPECT_EQ(theorem_weights(Theorem::T7),
            (std::vector<WeightKind>{WeightKind::Psi1RK, WeightKind::NegPsi2RK1}));
  EXPECT_FALSE(weight_needs_base(WeightKind::R2K));
  EXPECT_TRUE(weight_needs_base(WeightKind::TPhi2Base));
}

TEST(Oracle, OnlyForUnitKappaCoulomb) {
  EXPECT_TRUE(exact_oracle(Problem(1, s3(), family::Coulomb{0.5})));
  EXPECT_FALSE(exact_oracle(Problem(1, s3(), family::Coulomb{1.5})));
  EXPECT_FALSE(exact_oracle(
      Problem(1, AngularSector(3, HalfInteger::from_twice(3), -1), family::Coulomb{0.5})));
  EXPECT_FALSE(exact_oracle(Problem(1, s3(), family::Yukawa{0.5, 1})));
}

TEST(Crossings, LineExampleAgainstBisection) {
  const auto c = crossings(line_case());
  ASSERT_EQ(c.points.size(), 2u);
  EXPECT_EQ(c.first_sign, 1);
  EXPECT_NEAR(c.points[0], oracle::bisect(dv_line, 0.5, 1.5), 1e-9);
  EXPECT_NEAR(c.points[1], oracle::bisect(dv_line, 3, 5), 1e-9);
  EXPECT_NEAR(c.points[0], 0.94437, 1e-4);
  EXPECT_NEAR(c.points[1], 4.13782, 1e-4);
}

TEST(Crossings, IdenticalAndOrdered) {
  const Problem p(1, s3(), family::Exponential{1.5, 0.5});
  const auto same = crossings(ComparisonCase(p, p));
  EXPECT_TRUE(same.points.empty());
  EXPECT_EQ(same.first_sign, 0);
  const auto ord = crossings(ComparisonCase(p, Problem(1, s3(), family::Exponential{1.2, 0.5})));
  EXPECT_TRUE(ord.points.empty());
  EXPECT_EQ(ord.first_sign, 1);
}

TEST(Crossings, AnalyticLobes) {
  ComparisonOptions o;
  o.max_lobes = 50;
  const ComparisonCase c(Problem(1, s3(), family::OscCubic{3.4, 2.04, 7, 0.4, 7, 2.04}),
                         Problem(1, s3(), family::RationalCubic{3.4, 2.04, 7}));
  const auto x = crossings(c, 0, o);
  EXPECT_TRUE(x.analytic_lobes);
  ASSERT_EQ(x.points.size(), 50u);
  EXPECT_NEAR(7 * std::pow(x.points[0], 3) + 2.04, std::numbers::pi, 1e-12);
  EXPECT_EQ(x.first_sign, 1);
}

TEST(LineExample, AreasAndCorollary) {
  const auto r = end_to_end(line_case(), {}, Theorem::T1);
  const auto& th = pick(r, Theorem::T1, false);
  const auto& co = pick(r, Theorem::T1, true);
  const double x1 = r.ctx.cross.points[0], x2 = r.ctx.cross.points[1];
  const double A = oracle::simpson(dv_line, 0, x1, 200000);
  const double B = -oracle::simpson(dv_line, x1, x2, 200000);
  ASSERT_EQ(co.curves.size(), 1u);
  EXPECT_NEAR(co.curves[0].interval_areas[0], A, 1e-10);
  EXPECT_NEAR(co.curves[0].interval_areas[1], B, 1e-10);
  EXPECT_NEAR(A, 0.11456, 2e-5);
  EXPECT_NEAR(B, 0.11455, 2e-5);
  EXPECT_NEAR(*co.curves[0].shortcut_value, A - B, 1e-10);
  EXPECT_GT(A - B, 0);
  EXPECT_EQ(co.shortcut, "two_crossings");
  EXPECT_TRUE(th.applicable());
  EXPECT_TRUE(th.condition_holds);
  EXPECT_EQ(th.predicted, Prediction::EaAtMostEb);
  EXPECT_TRUE(th.consistent);
  // Laser-dressed tail ~ 1/x: the running integral grows without bound.
  EXPECT_FALSE(th.curves[0].value_at_infinity);
  EXPECT_FALSE(th.curves[0].tail_diverges_negative);
  EXPECT_NEAR(*r.ctx.Ea(), 0.45657, 5e-5);
  EXPECT_NEAR(*r.ctx.Eb(), 0.52332, 5e-5);
}

TEST(RadialExamples, CoulombSechZeta) {
  const auto r = end_to_end(coulomb_sech(), {}, Theorem::T7);
  ASSERT_TRUE(r.ctx.base && r.ctx.base->exact);
  const auto& co = pick(r, Theorem::T7, true);
  EXPECT_EQ(co.shortcut, "two_crossings");
  const double r2 = r.ctx.cross.points.at(1);
  const oracle::Coulomb ex{0.579, 1};
  auto dv = [](double t) { return -0.3 / std::pow(std::cosh(0.2 * t), 2) + 0.579 / t; };
  const double z1 = oracle::simpson([&](double t) { return t > 0 ? dv(t) * ex.psi(t).first * t : 0; },
                                    0, r2, 400000);
  const double z2 = oracle::simpson(
      [&](double t) { return t > 0 ? -dv(t) * ex.psi(t).second * t * t : 0; }, 0, r2, 400000);
  EXPECT_NEAR(*co.curves[0].shortcut_value, z1, 1e-7);
  EXPECT_NEAR(*co.curves[1].shortcut_value, z2, 1e-8);
  EXPECT_NEAR(z1, 0.18778, 2e-4);
  EXPECT_NEAR(z2, 0.00084, 5e-5);
  EXPECT_TRUE(co.applicable() && co.condition_holds && co.consistent);
}

TEST(RadialExamples, HulthenCoulombRho) {
  const auto r = end_to_end(hulthen_coulomb(), {}, Theorem::T5);
  const auto& co = pick(r, Theorem::T5, true);
  EXPECT_EQ(co.shortcut, "one_crossing");
  const oracle::Coulomb ex{0.508, 2};
  auto dv = [](double t) { return -0.508 / t + 0.2 / std::expm1(0.3 * t); };
  const double rho1 =
      oracle::simpson([&](double t) { return t > 0 ? dv(t) * ex.psi(t).first * t : 0; }, 0, 60,
                      600000);
  const double rho2 =
      oracle::simpson([&](double t) { return t > 0 ? -dv(t) * ex.psi(t).second * t : 0; }, 0, 60,
                      600000);
  EXPECT_NEAR(*co.curves[0].value_at_infinity, rho1, 1e-7);
  EXPECT_NEAR(*co.curves[1].value_at_infinity, rho2, 1e-7);
  EXPECT_NEAR(rho1, 0.00113, 5e-5);
  EXPECT_NEAR(rho2, 0.00031, 5e-5);
  EXPECT_TRUE(co.applicable() && co.condition_holds && co.consistent);
}

TEST(RadialExamples, LobeAreasMatchSineIntegral) {
  ComparisonOptions o;
  o.max_lobes = 200;
  const ComparisonCase c(Problem(1, s3(), family::OscCubic{3.4, 2.04, 7, 0.4, 7, 2.04}),
                         Problem(1, s3(), family::RationalCubic{3.4, 2.04, 7}));
  const auto r = end_to_end(c, o, Theorem::T3);
  const auto& co = pick(r, Theorem::T3, true);
  const double scale = 3.4 * 0.4 / 21;
  auto sz = [](double z) { return std::abs(std::sin(z)) / (z * z); };
  const double pi = std::numbers::pi;
  EXPECT_NEAR(co.curves[0].interval_areas[0] / scale, oracle::simpson(sz, 2.04, pi), 1e-8);
  EXPECT_NEAR(co.curves[0].interval_areas[1] / scale, oracle::simpson(sz, pi, 2 * pi), 1e-8);
  EXPECT_NEAR(co.curves[0].interval_areas[0] / scale, 0.0965, 2e-4);
  EXPECT_NEAR(co.curves[0].interval_areas[1] / scale, 0.0962, 2e-4);
  EXPECT_EQ(co.shortcut, "lobes");
  EXPECT_TRUE(co.condition_holds);
}

TEST(Properties, AntisymmetryUnderSwap) {
  const auto c = coulomb_sech();
  const auto ctx = prepare(c);
  const auto grid = curve_grid(ctx, WeightKind::Psi1RK);
  const auto base = *ctx.base;
  const auto fwd = weighted_cumulative(c, WeightKind::Psi1RK, grid, &base);
  const auto rev = weighted_cumulative(c.swapped(), WeightKind::Psi1RK, grid, &base);
  for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_NEAR(fwd.values[i], -rev.values[i], 1e-12);
}

TEST(Properties, PointwiseOrderedPairIsConsistent) {
  const ComparisonCase c(Problem(1, s3(), family::Exponential{1.5, 0.5}),
                         Problem(1, s3(), family::Exponential{1.2, 0.5}));
  const auto r = end_to_end(c);
  EXPECT_TRUE(r.all_consistent);
  EXPECT_LE(*r.ctx.Ea(), *r.ctx.Eb());
  for (const auto& v : r.verdicts) {
    for (const auto& cv : v.curves) EXPECT_GE(cv.min_value, -cv.tol_cond);
    if (v.theorem == Theorem::T3 || v.theorem == Theorem::T4 || v.theorem == Theorem::T7) {
      EXPECT_TRUE(v.applicable()) << theorem_number(v.theorem);
      EXPECT_EQ(v.predicted, Prediction::EaAtMostEb);
    }
  }
  ASSERT_TRUE(r.identity_residual);
  EXPECT_LT(*r.identity_residual, 1e-4);
}

TEST(Properties, IdenticalPotentials) {
  const Problem p(1, OneDim{}, family::Exponential{0.9, 0.5});
  const auto r = end_to_end(ComparisonCase(p, p));
  EXPECT_EQ(*r.identity_residual, 0.0);
  for (const auto& v : r.verdicts)
    if (v.theorem == Theorem::T1) {
      EXPECT_TRUE(v.condition_holds);
      EXPECT_TRUE(v.consistent);
    }
}

TEST(Properties, CorollaryImpliesTheorem) {
  for (const auto& c : {line_case(), coulomb_sech(), hulthen_coulomb()}) {
    const auto r = end_to_end(c);
    for (std::size_t i = 0; i + 1 < r.verdicts.size(); i += 2) {
      const auto& th = r.verdicts[i];
      const auto& co = r.verdicts[i + 1];
      ASSERT_FALSE(th.corollary);
      ASSERT_TRUE(co.corollary);
      if (co.condition_holds && !co.curves.empty()) EXPECT_TRUE(th.condition_holds);
    }
  }
}

TEST(Properties, FirstIntervalWrongSignIsInconclusive) {
  const auto r = end_to_end(line_case().swapped(), {}, Theorem::T1);
  const auto& co = pick(r, Theorem::T1, true);
  EXPECT_FALSE(co.condition_holds);
  EXPECT_EQ(co.predicted, Prediction::Inconclusive);
  EXPECT_TRUE(co.consistent);
}

TEST(Identity, ResidualSmallOnExamples) {
  for (const auto& c : {line_case(), coulomb_sech(), hulthen_coulomb()}) {
    const auto ctx = prepare(c);
    ASSERT_TRUE(ctx.sol_a && ctx.sol_b);
    EXPECT_LT(verify_identity(c, *ctx.sol_a, *ctx.sol_b), 1e-4);
  }
}

TEST(Verdicts, WrongGeometryIsInconclusive) {
  const auto v = check_theorem(line_case(), Theorem::T5);
  EXPECT_FALSE(v.applicable());
  EXPECT_TRUE(v.curves.empty());
  EXPECT_EQ(v.predicted, Prediction::Inconclusive);
  EXPECT_TRUE(v.consistent);
}

TEST(Verdicts, SolverFailureLeavesPartialReport) {
  const ComparisonCase c(Problem(1, s3(), family::Exponential{0.0, 1}),
                         Problem(1, s3(), family::Exponential{1.5, 0.5}));
  const auto r = end_to_end(c, {}, Theorem::T3);
  EXPECT_FALSE(r.ctx.sol_a);
  EXPECT_FALSE(r.ctx.error_a.empty());
  EXPECT_TRUE(r.ctx.sol_b);
  EXPECT_FALSE(r.identity_residual);
  EXPECT_TRUE(r.all_consistent);
}
