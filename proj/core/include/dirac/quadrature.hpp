#pragma once

#include <functional>
#include <span>
#include <vector>

namespace dirac {

using Integrand = std::function<double(double)>;

struct IntegralResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int evaluations = 0;
};

struct AdaptiveOptions {
  int max_segments = 4000;
  // Substitute x = a + (b - a) u^2 on the leftmost segment to tame r^p
  // endpoint behaviour (p > -1).
  bool grade_left = false;
};

// Global adaptive 15/31-point Gauss-Kronrod. Target accuracy is
// tol * max(1, |value|). Throws IntegrationError (carrying the best estimate)
// if the segment budget runs out or the integrand is not finite.
IntegralResult integrate_adaptive(const Integrand& f, double a, double b, double tol,
                                  const AdaptiveOptions& opts = {});

// Same, seeded with the given breakpoints (kinks, crossings).
IntegralResult integrate_panels(const Integrand& f, std::span<const double> breakpoints,
                                double tol, const AdaptiveOptions& opts = {});

struct DecayHint {
  enum class Kind { Exponential, Power };
  Kind kind;
  double rate;  // e^{-rate x} or x^{-rate}

  static DecayHint exponential(double rate) { return {Kind::Exponential, rate}; }
  static DecayHint power(double p) { return {Kind::Power, p}; }
};

// Truncates where the hinted tail bound drops below tol/2. Power decay with
// exponent <= 1 has no finite tail and throws IntegrationError.
IntegralResult integrate_to_infinity(const Integrand& f, double a, double tol, DecayHint decay,
                                     const AdaptiveOptions& opts = {});

struct Bracket {
  double lo;
  double hi;
};

// Probe grid is linear, plus log-spaced probes when a == 0. Exact zeros at
// probes are stepped over.
std::vector<Bracket> find_sign_changes(const Integrand& f, double a, double b, int probes);

// TOMS 748 on a sign-changing bracket; result lies in [lo, hi].
double refine_root(const Integrand& f, double lo, double hi, double tol = 1e-10,
                   int max_iterations = 200);

struct CumulativeCurve {
  std::vector<double> grid;
  std::vector<double> values;
  struct Point {
    double location = 0.0;
    double value = 0.0;
  } minimum;
  double error_estimate = 0.0;

  double back() const { return values.back(); }
  // Linear lookup of the running integral at a grid point (exact match).
  double at(double x) const;
};

// Running integral over a grid starting at 0; the first panel is graded.
CumulativeCurve cumulative_integral(const Integrand& f, std::span<const double> grid,
                                    double tol = 1e-9);

}  // namespace dirac
