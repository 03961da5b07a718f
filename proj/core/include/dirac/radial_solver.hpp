#pragma once

// Nodeless bound state of the radial (d > 1) or even 1D Dirac system.
//
// Internally every problem is integrated in the radial form
//   psi1' = (m + E - V) psi2 - (k/r) psi1
//   psi2' = (m - E + V) psi1 + (k/r) psi2
// with k = 0 on the line, where psi2 = -phi2. Public outputs use the native
// convention of the geometry (phi1, phi2 on the line).

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "dirac/core_model.hpp"

namespace dirac {

using Spinor = std::array<double, 2>;

struct ShootingConfig {
  double r_min = 0.0;  // 0: 1e-6 x characteristic length (0 on the line)
  double r_max = 0.0;  // 0: grown until sqrt(m^2 - E^2) r_max >= decay_lengths
  double ode_tol = 1e-12;
  double energy_tol = 1e-10;
  int max_bisections = 200;
  int scan_points = 64;
  double decay_lengths = 35.0;
};

// Right-hand side in the native convention of the geometry.
Spinor rhs(const Problem& p, double E, double r, Spinor psi);

struct SeriesStart {
  Spinor psi;      // values at eps (psi1 = eps^p1 before any rescaling)
  double p1, p2;   // leading exponents
  double ratio;    // C2 / C1
};

// Two-term origin series. On the line returns phi = (1, 0) at 0.
SeriesStart series_start(const Problem& p, double E, double eps);

struct Trajectory {
  std::vector<double> r;
  std::vector<double> psi1, psi2;
  // True value = stored value * exp(log_scale[i]).
  std::vector<double> log_scale;
  int rescales = 0;
};

// Outward linear integration from the series start to r_max, sup-norm
// renormalised in flight.
Trajectory integrate_out(const Problem& p, double E, const ShootingConfig& cfg);

// psi2/psi1 at r_max minus the decaying ratio -sqrt((m-E)/(m+E)). Returns
// a signed infinity when psi1(r_max) vanishes.
double mismatch(const Problem& p, double E, const ShootingConfig& cfg);

// Pruefer-phase mismatch theta_out(r_c) - theta_in(r_c); strictly decreasing
// in E, zero at the nodeless eigenvalue.
double phase_mismatch(const Problem& p, double E, const ShootingConfig& cfg,
                      std::optional<double> r_match = std::nullopt);

struct WaveSolution {
  double energy = 0.0;
  double mass = 0.0;
  double kappa = 0.0;
  bool one_dim = false;
  PotentialClass potential_class = potential_class::Bounded{0.0};

  std::vector<double> grid;
  std::vector<double> psi1, psi2;    // native convention, normalised
  std::vector<double> dpsi1, dpsi2;  // exact derivatives from rhs
  int nodes1 = 0;
  int nodes2 = 0;  // on the line includes the boundary zero of phi2
  double norm = 0.0;

  double r_min = 0.0, r_max = 0.0;
  double decay = 0.0;  // sqrt(m^2 - E^2)
  double p1 = 0.0, p2 = 0.0;
  double r_match = 0.0;
  int energy_evaluations = 0;

  // Hermite interpolation inside the grid, power law below r_min and
  // exponential decay above r_max. On the line negative x uses parity.
  Spinor at(double r) const;
  double psi1_at(double r) const { return at(r)[0]; }
  double psi2_at(double r) const { return at(r)[1]; }
};

WaveSolution solve_ground(const Problem& p, const ShootingConfig& cfg = {});

struct NodeCount {
  int n1 = 0;
  int n2 = 0;
  friend bool operator==(NodeCount, NodeCount) = default;
};

// Strict interior sign changes ignoring |value| < rel_threshold * sup.
NodeCount count_nodes(const Trajectory& t, double rel_threshold = 1e-7);
NodeCount count_nodes(const std::vector<double>& psi1, const std::vector<double>& psi2,
                      double rel_threshold = 1e-7);

struct LemmaReport {
  double w1 = 0.0, w2 = 0.0;  // psi1 / r^w1 nonincreasing, psi2 / r^w2 nondecreasing
  double violation1 = 0.0;    // largest wrong-way step relative to the ratio's scale
  double violation2 = 0.0;
  bool holds(double tol = 1e-6) const { return violation1 <= tol && violation2 <= tol; }
};

// Weights follow the class: |k|, |k|+1 for bounded and sub-Coulomb, |k|, |k|
// for Coulomb-like. Pass w2 to override the second weight.
LemmaReport lemma_monotonicity_check(const WaveSolution& s,
                                     std::optional<double> w2 = std::nullopt);

struct EffectiveMassRoot {
  std::vector<double> roots;  // zeros of m - E + V(r)
  bool unique = false;
  std::string note;
};

EffectiveMassRoot sign_change_of_effective_mass(const Problem& p, double E);

// Does phi2' change sign exactly once on the line (single interior maximum)?
bool phi2_single_maximum(const WaveSolution& s);

}  // namespace dirac
