#pragma once

// Refined comparison machinery: crossings of V_b - V_a, weighted cumulative
// integrals, theorem and corollary verdicts, and the overlap identity
//   (E_b - E_a) int (psi1a psi1b + psi2a psi2b) = int (V_b - V_a)(psi1a psi1b + psi2a psi2b).

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dirac/core_model.hpp"
#include "dirac/exact_solutions.hpp"
#include "dirac/quadrature.hpp"
#include "dirac/radial_solver.hpp"

namespace dirac {

enum class WeightKind { Unit, Phi1Base, TPhi2Base, R2K, Psi1RK, NegPsi2RK1, NegPsi2RK };

std::string_view weight_name(WeightKind k);
bool weight_needs_base(WeightKind k);
std::vector<WeightKind> theorem_weights(Theorem t);

// Wave functions of the base problem in the native convention.
struct BaseWave {
  std::function<Spinor(double)> psi;
  double energy = 0.0;
  double decay = 0.0;
  bool exact = false;
};

// Exact Dirac-Coulomb oracle when the problem is Coulomb(v < 1) with kappa = -1.
std::optional<CoulombGround> exact_oracle(const Problem& p);
BaseWave base_from(const WaveSolution& s);
BaseWave base_from(const CoulombGround& g);

struct CrossingInfo {
  std::vector<double> points;
  int first_sign = 0;           // sign of V_b - V_a on (0, x1); +1 means V_a <= V_b
  bool analytic_lobes = false;  // zeros of sin(kappa r^3 + s)
  bool lobes_truncated = false;
  double r_hi = 0.0;
};

struct ComparisonOptions {
  ShootingConfig shooting;
  double int_tol = 1e-11;
  double root_tol = 1e-10;
  double cond_rel = 1e-7;  // tol_cond = cond_rel * max |curve|
  int max_lobes = 2000;
  bool use_exact_oracle = true;
};

// Roots of V_b - V_a on (0, r_hi); r_hi = 0 picks max(60 L, 40) with L the
// larger characteristic length.
CrossingInfo crossings(const ComparisonCase& c, double r_hi = 0.0,
                       const ComparisonOptions& opts = {});

// (V_b - V_a)(t) * w(t).
Integrand weighted_integrand(const ComparisonCase& c, WeightKind kind, const BaseWave* base);

CumulativeCurve weighted_cumulative(const ComparisonCase& c, WeightKind kind,
                                    std::span<const double> grid, const BaseWave* base,
                                    double tol = 1e-11);

enum class Prediction { EaAtMostEb, Inconclusive };

struct CurveReport {
  WeightKind kind;
  CumulativeCurve curve;
  double tol_cond = 0.0;
  double min_value = 0.0;  // includes the tail beyond the grid
  double min_location = 0.0;
  // Running integral at infinity; nullopt if the tail diverges.
  std::optional<double> value_at_infinity;
  bool tail_diverges_negative = false;
  bool holds = false;
  // Corollary data.
  std::vector<double> interval_areas;  // |area| on [0,x1], [x1,x2], ...
  std::optional<double> tail_area;     // |area| beyond the last crossing
  std::optional<double> shortcut_value;
};

struct TheoremVerdict {
  Theorem theorem = Theorem::T1;
  bool corollary = false;
  std::string shortcut;  // corollary form used
  ApplicabilityReport applicability;
  std::vector<CurveReport> curves;
  bool condition_holds = false;
  Prediction predicted = Prediction::Inconclusive;
  std::optional<double> Ea, Eb;
  bool consistent = true;
  std::vector<std::string> notes;

  bool applicable() const { return applicability.applicable; }
};

// Solutions, base wave and crossing structure shared by all verdicts of a case.
struct ComparisonContext {
  ComparisonCase cs;
  ComparisonOptions opts;
  std::optional<WaveSolution> sol_a, sol_b;
  std::string error_a, error_b;
  std::optional<BaseWave> base;
  CrossingInfo cross;
  double length = 1.0;  // larger characteristic length

  std::optional<double> Ea() const;
  std::optional<double> Eb() const;
};

ComparisonContext prepare(const ComparisonCase& c, const ComparisonOptions& opts = {});

// Grid for the theorem curves: log points up to L, linear to the horizon,
// crossings inserted.
std::vector<double> curve_grid(const ComparisonContext& ctx, WeightKind kind);

TheoremVerdict check_theorem(const ComparisonContext& ctx, Theorem t);
TheoremVerdict check_corollary(const ComparisonContext& ctx, Theorem t);
TheoremVerdict check_theorem(const ComparisonCase& c, Theorem t,
                             const ComparisonOptions& opts = {});
TheoremVerdict check_corollary(const ComparisonCase& c, Theorem t,
                               const ComparisonOptions& opts = {});

double verify_identity(const ComparisonCase& c, const WaveSolution& a, const WaveSolution& b);

struct ComparisonReport {
  ComparisonContext ctx;
  std::vector<TheoremVerdict> verdicts;  // theorem then corollary, per theorem
  std::optional<double> identity_residual;
  bool all_consistent = true;
};

// Every theorem posed for the geometry (or just `only`).
ComparisonReport end_to_end(const ComparisonCase& c, const ComparisonOptions& opts = {},
                            std::optional<Theorem> only = std::nullopt);

}  // namespace dirac
