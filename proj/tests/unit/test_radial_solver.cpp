#include <gtest/gtest.h>

#include <cmath>

#include "dirac/errors.hpp"
#include "dirac/exact_solutions.hpp"
#include "dirac/radial_solver.hpp"
#include "oracles.hpp"

using namespace dirac;

namespace {

AngularSector sector(int d, int twice_j, int tau = -1) {
  return AngularSector(d, HalfInteger::from_twice(twice_j), tau);
}

double norm_line(const WaveSolution& s) {
  auto f = [&](double x) {
    const auto p = s.at(x);
    return p[0] * p[0] + p[1] * p[1];
  };
  return 2 * oracle::simpson(f, 0, s.r_max, 200000);
}

}  // namespace

TEST(Solver, ExponentialWellOnTheLine) {
  const Problem p(1, OneDim{}, family::Exponential{0.9, 0.5});
  const auto s = solve_ground(p);
  EXPECT_NEAR(s.energy, 0.49233, 5e-5);

  oracle::Shooter sh{[](double x) { return -0.9 * std::exp(-0.5 * x); }, 1.0, 0.0, 50.0, 100000};
  EXPECT_NEAR(s.energy, sh.ground(), 2e-8);

  EXPECT_EQ(s.nodes1, 0);
  EXPECT_EQ(s.nodes2, 1);  // the zero of the odd component at the origin
  EXPECT_NEAR(s.norm, 1.0, 1e-10);
  EXPECT_NEAR(norm_line(s), 1.0, 1e-7);
  EXPECT_TRUE(s.one_dim);
  EXPECT_DOUBLE_EQ(s.decay, std::sqrt(1 - s.energy * s.energy));
}

TEST(Solver, LineParity) {
  const auto s = solve_ground(Problem(1, OneDim{}, family::Exponential{0.9, 0.5}));
  for (double x : {0.3, 1.7, 6.0}) {
    EXPECT_DOUBLE_EQ(s.at(-x)[0], s.at(x)[0]);
    EXPECT_DOUBLE_EQ(s.at(-x)[1], -s.at(x)[1]);
  }
  EXPECT_DOUBLE_EQ(s.at(0)[1], 0.0);
  EXPECT_TRUE(phi2_single_maximum(s));
}

TEST(Solver, WoodsSaxonAgainstRk4Oracle) {
  const Problem p(1, sector(8, 3), family::WoodsSaxon{4, 2, 1.2});
  const auto s = solve_ground(p);
  oracle::Shooter sh{[](double r) { return -4 / (1 + std::exp((r - 2) / 1.2)); }, 1.0, -4.5, 60.0,
                     120000};
  EXPECT_NEAR(s.energy, sh.ground(), 1e-7);
  EXPECT_EQ(s.nodes1, 0);
  EXPECT_EQ(s.nodes2, 0);
  EXPECT_NEAR(s.p1, 4.5, 1e-12);
  EXPECT_NEAR(s.p2, 5.5, 1e-12);
}

TEST(Solver, CoulombMatchesExact) {
  for (double a : {0.3, 0.508, 0.579, 0.8})
    for (double m : {1.0, 2.0}) {
      const auto s = solve_ground(Problem(m, sector(3, 1), family::Coulomb{a}));
      const oracle::Coulomb ex{a, m};
      EXPECT_NEAR(s.energy, ex.energy(), 5e-9) << a << " " << m;
      EXPECT_NEAR(s.p1, ex.gamma(), 1e-12);
      for (double r : {0.1 / m, 1.0 / m, 4.0 / m}) {
        EXPECT_NEAR(s.psi1_at(r), ex.psi(r).first, 1e-6);
        EXPECT_NEAR(s.psi2_at(r), ex.psi(r).second, 1e-6);
      }
    }
}

TEST(Solver, BoundedRadialAgainstOracle) {
  const Problem p(1, sector(3, 1), family::SechSquared{0.3, 0.2});
  const auto s = solve_ground(p);
  oracle::Shooter sh{[](double r) { return -0.3 / std::pow(std::cosh(0.2 * r), 2); }, 1.0, -1.0,
                     160.0, 160000};
  EXPECT_NEAR(s.energy, sh.ground(), 2e-7);
  EXPECT_NEAR(s.energy, 0.88318, 5e-5);
}

TEST(Solver, ScalingWithMass) {
  // V(r) = -v/r scales exactly: E(m) = m E(1).
  const auto s1 = solve_ground(Problem(1, sector(3, 1), family::Coulomb{0.4}));
  const auto s2 = solve_ground(Problem(3, sector(3, 1), family::Coulomb{0.4}));
  EXPECT_NEAR(s2.energy, 3 * s1.energy, 1e-8);
}

TEST(Solver, DeeperWellLowersEnergy) {
  double prev = 1.0;
  for (double beta : {0.5, 0.6, 0.7, 0.8, 0.9}) {
    const double e = solve_ground(Problem(1, OneDim{}, family::Exponential{beta, 0.5})).energy;
    EXPECT_LT(e, prev);
    prev = e;
  }
}

TEST(Solver, SubCoulombAndScreened) {
  const auto ps = solve_ground(Problem(1, sector(3, 1), family::PowerSingular{1, 0.5}));
  EXPECT_EQ(ps.nodes1 + ps.nodes2, 0);
  EXPECT_NEAR(ps.norm, 1.0, 1e-9);
  EXPECT_NEAR(ps.p1, 1.0, 1e-12);
  const auto h = solve_ground(Problem(2, sector(3, 1), family::Hulthen{0.2, 0.3}));
  EXPECT_NEAR(h.energy, 1.58604, 5e-5);
}

TEST(Solver, Errors) {
  EXPECT_THROW(solve_ground(Problem(1, sector(3, 1), family::Exponential{0, 1})), NoBoundState);
  EXPECT_THROW(solve_ground(Problem(1, sector(3, 1), family::Coulomb{1.2})), SolverError);
  EXPECT_THROW(solve_ground(Problem(1, sector(3, 1, 1), family::Exponential{1, 1})), DomainError);
  EXPECT_THROW(solve_ground(Problem(1, OneDim{}, family::Coulomb{0.5})), DomainError);
  EXPECT_THROW(rhs(Problem(1, sector(3, 1), family::Coulomb{0.5}), 0.5, 0.0, {1, 0}), DomainError);
}

TEST(Solver, WeakWellStillBinds) {
  const auto s = solve_ground(Problem(1, OneDim{}, family::Exponential{0.05, 1}));
  EXPECT_GT(s.energy, 0.99);
  EXPECT_LT(s.energy, 1.0);
  EXPECT_NEAR(s.norm, 1.0, 1e-9);
}

TEST(Series, BoundedStart) {
  const Problem p(1, sector(3, 1), family::Exponential{0.9, 0.5});
  const double E = 0.6, eps = 1e-4;
  const auto st = series_start(p, E, eps);
  EXPECT_DOUBLE_EQ(st.p1, 1.0);
  EXPECT_DOUBLE_EQ(st.p2, 2.0);
  // psi2/psi1 ~ C2 r with C2 = (m - E + V0)/(1 - 2k).
  EXPECT_NEAR(st.psi[1] / st.psi[0], (1 - E - 0.9) / 3 * eps, 1e-12);
  EXPECT_DOUBLE_EQ(st.ratio, (1 - E - 0.9) / 3);
}

TEST(Series, CoulombStartRatio) {
  const double a = 0.5;
  const auto st = series_start(Problem(1, sector(3, 1), family::Coulomb{a}), 0.8, 1e-6);
  const double g = std::sqrt(1 - a * a);
  EXPECT_NEAR(st.p1, g, 1e-14);
  EXPECT_NEAR(st.ratio, (g - 1) / a, 1e-14);
}

TEST(Residual, RhsMatchesInterpolatedDerivative) {
  const Problem p(1, sector(3, 1), family::SechSquared{0.3, 0.2});
  const auto s = solve_ground(p);
  for (std::size_t i = 5; i < s.grid.size(); i += s.grid.size() / 17) {
    const auto d = rhs(p, s.energy, s.grid[i], {s.psi1[i], s.psi2[i]});
    EXPECT_NEAR(d[0], s.dpsi1[i], 1e-12);
    EXPECT_NEAR(d[1], s.dpsi2[i], 1e-12);
  }
}

TEST(Nodes, CountsSignChanges) {
  EXPECT_EQ(count_nodes({1, 2, -1, -2, 3}, {1, 1, 1, 1, 1}), (NodeCount{2, 0}));
  // Wiggles below the threshold are ignored.
  EXPECT_EQ(count_nodes({1, 1e-9, -1e-9, 1}, {0, 0, 0, 0}), (NodeCount{0, 0}));
}

TEST(Lemma, MonotoneRatiosOnRadialStates) {
  for (const auto& p : {Problem(1, sector(3, 1), family::SechSquared{0.3, 0.2}),
                        Problem(1, sector(3, 1), family::Coulomb{0.579}),
                        Problem(1, sector(3, 1), family::PowerSingular{1, 0.5}),
                        Problem(1, sector(8, 3), family::WoodsSaxon{4, 2, 1.2})}) {
    const auto s = solve_ground(p);
    const auto l = lemma_monotonicity_check(s);
    EXPECT_TRUE(l.holds(1e-6)) << p.potential.name() << " " << l.violation1 << " "
                               << l.violation2;
  }
}

TEST(EffectiveMass, SingleRoot) {
  const Problem p(1, sector(3, 1), family::SechSquared{0.3, 0.2});
  const auto r = sign_change_of_effective_mass(p, 0.8);
  ASSERT_TRUE(r.unique);
  EXPECT_NEAR(1 - 0.8 - 0.3 / std::pow(std::cosh(0.2 * r.roots[0]), 2), 0.0, 1e-10);
  const auto none = sign_change_of_effective_mass(p, 0.5);
  EXPECT_TRUE(none.roots.empty());
  EXPECT_EQ(none.note, "no interior sign change");
}

TEST(Trajectory, OutwardIntegrationRescales) {
  const Problem p(1, sector(3, 1), family::Exponential{3.0, 0.5});
  ShootingConfig cfg;
  cfg.r_max = 200;
  const auto t = integrate_out(p, 0.0, cfg);
  EXPECT_GT(t.rescales, 0);
  for (double v : t.psi1) EXPECT_TRUE(std::isfinite(v));
}
