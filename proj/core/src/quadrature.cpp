#include "dirac/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "dirac/errors.hpp"

namespace dirac {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Segment {
  double a, b, value, error;
};

// One GK31 panel. The Gauss 15 nodes are the even-index Kronrod abscissas.
template <class F>
Segment gk31(const F& f, double a, double b, int& evals) {
  using boost::math::quadrature::gauss;
  using boost::math::quadrature::gauss_kronrod;
  const auto& x = gauss_kronrod<double, 31>::abscissa();
  const auto& wk = gauss_kronrod<double, 31>::weights();
  const auto& wg = gauss<double, 15>::weights();

  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const double f0 = f(c);
  double k = wk[0] * f0, g = wg[0] * f0, resabs = std::abs(k);
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double fl = f(c - h * x[i]);
    const double fr = f(c + h * x[i]);
    k += wk[i] * (fl + fr);
    resabs += wk[i] * (std::abs(fl) + std::abs(fr));
    if (i % 2 == 0) g += wg[i / 2] * (fl + fr);
  }
  evals += 31;
  k *= h;
  g *= h;
  resabs *= std::abs(h);
  if (!std::isfinite(k)) throw IntegrationError("non-finite integrand value", k, k);
  const double err = std::max(std::abs(k - g), 50.0 * kEps * resabs);
  return {a, b, k, err};
}

IntegralResult adaptive_core(const Integrand& f_in, std::vector<double> breaks, double tol,
                             const AdaptiveOptions& opts) {
  if (!(tol > 0)) throw std::invalid_argument("integration tolerance must be positive");
  IntegralResult out;
  if (breaks.size() < 2) return out;

  // Optional grading of the leftmost segment: x = a + (b - a) u^2.
  const double ga = breaks[0], gb = breaks[1], gw = gb - ga;
  auto graded = [&](double u) { return 2.0 * gw * u * f_in(ga + gw * u * u); };

  double total = 0.0, err = 0.0;

  // Graded segments live in u in [0, 1].
  struct Tagged {
    Segment s;
    bool graded;
    bool operator<(const Tagged& o) const { return s.error < o.s.error; }
  };
  std::priority_queue<Tagged> q;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (!(breaks[i + 1] > breaks[i])) {
      if (breaks[i + 1] == breaks[i]) continue;
      throw std::invalid_argument("integration breakpoints must increase");
    }
    const bool g = i == 0 && opts.grade_left;
    const Segment s = g ? gk31(graded, 0.0, 1.0, out.evaluations)
                        : gk31(f_in, breaks[i], breaks[i + 1], out.evaluations);
    q.push({s, g});
    total += s.value;
    err += s.error;
  }

  int segments = static_cast<int>(q.size());
  while (!q.empty()) {
    if (err <= tol * std::max(1.0, std::abs(total))) break;
    if (segments >= opts.max_segments) {
      throw IntegrationError("adaptive quadrature did not converge", total, err);
    }
    const Tagged t = q.top();
    q.pop();
    const double mid = 0.5 * (t.s.a + t.s.b);
    if (!(mid > t.s.a && mid < t.s.b)) {
      // Segment cannot be split further in floating point.
      throw IntegrationError("adaptive quadrature hit floating-point resolution", total, err);
    }
    const Segment l = t.graded ? gk31(graded, t.s.a, mid, out.evaluations)
                               : gk31(f_in, t.s.a, mid, out.evaluations);
    const Segment r = t.graded ? gk31(graded, mid, t.s.b, out.evaluations)
                               : gk31(f_in, mid, t.s.b, out.evaluations);
    total += l.value + r.value - t.s.value;
    err += l.error + r.error - t.s.error;
    q.push({l, t.graded});
    q.push({r, t.graded});
    ++segments;
  }
  // Recompute sums to shed accumulated cancellation error.
  total = 0.0;
  err = 0.0;
  while (!q.empty()) {
    total += q.top().s.value;
    err += q.top().s.error;
    q.pop();
  }
  out.value = total;
  out.error_estimate = err;
  return out;
}

}  // namespace

IntegralResult integrate_adaptive(const Integrand& f, double a, double b, double tol,
                                  const AdaptiveOptions& opts) {
  if (a == b) return {};
  if (a > b) {
    auto r = integrate_adaptive(f, b, a, tol, opts);
    r.value = -r.value;
    return r;
  }
  return adaptive_core(f, {a, b}, tol, opts);
}

IntegralResult integrate_panels(const Integrand& f, std::span<const double> breakpoints,
                                double tol, const AdaptiveOptions& opts) {
  return adaptive_core(f, std::vector<double>(breakpoints.begin(), breakpoints.end()), tol, opts);
}

IntegralResult integrate_to_infinity(const Integrand& f, double a, double tol, DecayHint decay,
                                     const AdaptiveOptions& opts) {
  if (!(decay.rate > 0)) throw std::invalid_argument("decay rate must be positive");
  if (decay.kind == DecayHint::Kind::Power && decay.rate <= 1.0)
    throw IntegrationError("tail bound unattainable: power decay x^-p with p <= 1",
                           std::numeric_limits<double>::infinity(),
                           std::numeric_limits<double>::infinity());

  // Local sup of |f| just past T, sampled.
  auto sup_near = [&](double T, double w) {
    double s = 0.0;
    for (int i = 0; i <= 8; ++i) s = std::max(s, std::abs(f(T + w * i / 8.0)));
    return s;
  };

  std::vector<double> breaks{a};
  const double half = 0.5 * tol;
  double tail = std::numeric_limits<double>::infinity();
  if (decay.kind == DecayHint::Kind::Exponential) {
    const double w = 1.0 / decay.rate;
    double T = a;
    for (int k = 0; k < 4000; ++k) {
      T += w * std::min(8.0, 1.0 + k);
      breaks.push_back(T);
      tail = sup_near(T, w) / decay.rate;
      if (tail < half) break;
    }
  } else {
    const double p = decay.rate;
    double T = std::max(std::abs(a), 1.0);
    if (T <= a) T = a + 1.0;
    for (int k = 0; k < 200; ++k) {
      breaks.push_back(T);
      tail = sup_near(T, T) * T / (p - 1.0);
      if (tail < half) break;
      T *= 2.0;
    }
  }
  if (!(tail < half)) {
    double best = std::numeric_limits<double>::quiet_NaN();
    try {
      best = integrate_panels(f, breaks, tol, opts).value;
    } catch (const IntegrationError& e) {
      best = e.best_estimate();
    }
    throw IntegrationError("tail bound unattainable within truncation budget", best, tail);
  }
  auto r = integrate_panels(f, breaks, half, opts);
  r.error_estimate += tail;
  return r;
}

std::vector<Bracket> find_sign_changes(const Integrand& f, double a, double b, int probes) {
  if (probes < 2) throw std::invalid_argument("need at least two probes");
  if (!(b > a)) return {};
  std::vector<double> x;
  x.reserve(static_cast<std::size_t>(2 * probes));
  for (int i = 0; i < probes; ++i) x.push_back(a + (b - a) * i / (probes - 1));
  if (a == 0.0) {
    x.front() = 1e-9 * b;
    const double lo = std::log(1e-9 * b), hi = std::log(b);
    for (int i = 0; i < probes; ++i) x.push_back(std::exp(lo + (hi - lo) * i / (probes - 1)));
    std::sort(x.begin(), x.end());
    x.erase(std::unique(x.begin(), x.end()), x.end());
  }

  std::vector<Bracket> out;
  double prev_x = 0.0, prev_f = 0.0;
  bool have_prev = false;
  for (double xi : x) {
    const double fi = f(xi);
    if (!std::isfinite(fi) || fi == 0.0) continue;
    if (have_prev && (prev_f < 0) != (fi < 0)) out.push_back({prev_x, xi});
    prev_x = xi;
    prev_f = fi;
    have_prev = true;
  }
  return out;
}

double refine_root(const Integrand& f, double lo, double hi, double tol, int max_iterations) {
  if (lo > hi) std::swap(lo, hi);
  const double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo < 0) == (fhi < 0)) throw std::invalid_argument("refine_root: bracket has no sign change");
  std::uintmax_t iters = static_cast<std::uintmax_t>(max_iterations);
  auto done = [tol](double x, double y) { return std::abs(y - x) <= tol; };
  const auto r = boost::math::tools::toms748_solve([&](double x) { return f(x); }, lo, hi, flo,
                                                   fhi, done, iters);
  if (!done(r.first, r.second))
    throw SolverError("refine_root: iteration budget exhausted");
  return std::clamp(0.5 * (r.first + r.second), lo, hi);
}

double CumulativeCurve::at(double x) const {
  if (grid.empty()) throw std::logic_error("empty curve");
  if (x <= grid.front()) return values.front();
  if (x >= grid.back()) return values.back();
  const auto it = std::lower_bound(grid.begin(), grid.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - grid.begin());
  if (*it == x) return values[i];
  const double t = (x - grid[i - 1]) / (grid[i] - grid[i - 1]);
  return values[i - 1] + t * (values[i] - values[i - 1]);
}

CumulativeCurve cumulative_integral(const Integrand& f, std::span<const double> grid, double tol) {
  if (grid.empty() || grid.front() != 0.0)
    throw std::invalid_argument("cumulative grid must start at 0");
  CumulativeCurve c;
  c.grid.assign(grid.begin(), grid.end());
  c.values.assign(grid.size(), 0.0);
  c.minimum = {0.0, 0.0};
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    if (!(grid[i + 1] > grid[i])) throw std::invalid_argument("cumulative grid must increase");
    AdaptiveOptions o;
    o.grade_left = i == 0;
    const auto r = integrate_adaptive(f, grid[i], grid[i + 1], tol, o);
    acc += r.value;
    c.error_estimate += r.error_estimate;
    c.values[i + 1] = acc;
    if (acc < c.minimum.value) c.minimum = {grid[i + 1], acc};
  }
  return c;
}

}  // namespace dirac
