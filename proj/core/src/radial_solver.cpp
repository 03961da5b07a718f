#include "dirac/radial_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/tools/toms748_solve.hpp>
#include <boost/numeric/odeint.hpp>

#include "dirac/errors.hpp"
#include "dirac/quadrature.hpp"

namespace dirac {

namespace odeint = boost::numeric::odeint;

namespace {

using Phase = std::array<double, 1>;

struct Model {
  double m;
  double k;
  bool line;
  const PotentialSpec* V;
  PotentialClass cls;
  double L;

  explicit Model(const Problem& p)
      : m(p.mass),
        k(geometry_kappa(p.geometry)),
        line(is_one_dim(p.geometry)),
        V(&p.potential),
        cls(classify(p.potential)),
        L(p.potential.characteristic_length()) {}

  double pot(double r) const { return (*V)(std::abs(r)); }

  // psi convention on both geometries.
  Spinor deriv(double E, double r, const Spinor& y) const {
    const double v = pot(r);
    const double kr = line ? 0.0 : k / r;
    return {(m + E - v) * y[1] - kr * y[0], (m - E + v) * y[0] + kr * y[1]};
  }

  double dtheta(double E, double r, double th) const {
    const double v = pot(r);
    const double c = std::cos(th), s = std::sin(th);
    const double kr = line ? 0.0 : k / r;
    return (m - E + v) * c * c - (m + E - v) * s * s + 2.0 * kr * s * c;
  }

  double decay(double E) const { return std::sqrt(std::max(m * m - E * E, 0.0)); }
  double target_ratio(double E) const { return -std::sqrt((m - E) / (m + E)); }
  double scale() const { return std::min(L, 1.0 / m); }
};

void check_supported(const Model& md) {
  if (std::holds_alternative<potential_class::Unsupported>(md.cls))
    throw DomainError("unsupported potential: " +
                      std::get<potential_class::Unsupported>(md.cls).reason);
  if (md.line && !std::holds_alternative<potential_class::Bounded>(md.cls))
    throw DomainError("line problems need a bounded potential");
  if (!md.line && !(md.k < 0))
    throw DomainError("nodeless states need kappa < 0");
  if (const auto* c = std::get_if<potential_class::CoulombLike>(&md.cls))
    if (c->f0 >= std::abs(md.k)) throw SolverError("supercritical coupling: f0 >= |kappa|");
}

// Adaptive dopri5 from t0 to t1 (either direction). The observer sees every
// accepted step and returns true if it rescaled the state.
template <class State, class Sys, class Obs>
void drive(const Sys& sys, State& x, double t0, double t1, double dt0, double tol,
           double max_step, Obs&& obs) {
  auto stepper = odeint::make_controlled(tol * 1e-3, tol, odeint::runge_kutta_dopri5<State>());
  const double dir = t1 > t0 ? 1.0 : -1.0;
  double t = t0;
  double dt = dir * std::min(std::abs(dt0), max_step);
  long steps = 0;
  while (dir * (t1 - t) > 0) {
    if (dir * (t + dt - t1) > 0) dt = t1 - t;
    if (std::abs(dt) > max_step) dt = dir * max_step;
    const auto res = stepper.try_step(sys, x, t, dt);
    if (res == odeint::success) {
      if (obs(x, t)) stepper.reset();
    } else if (std::abs(dt) < 1e-15 * std::max(std::abs(t), 1e-300)) {
      throw SolverError("step size underflow (stiff problem)");
    }
    if (++steps > 2000000) throw SolverError("step budget exhausted");
  }
}

struct Start {
  Spinor psi;  // psi convention, psi1 = 1
  double log_scale;
  double p1, p2, ratio;
};

Start origin_start(const Model& md, double E, double eps) {
  if (md.line) return {{1.0, 0.0}, 0.0, 0.0, 1.0, 0.0};
  const double ka = std::abs(md.k);
  if (const auto* b = std::get_if<potential_class::Bounded>(&md.cls)) {
    const double meff = md.m - E + b->V0;
    if (std::abs(meff) < 1e-14 * md.m)
      throw DomainError("m - E + V0 vanishes; perturb the energy");
    const double c2 = meff / (1.0 - 2.0 * md.k);
    // Next ψ1 term: r^{|k|}(1 + a r^2), a = (m + E - V0) c2 / 2.
    const double a = (md.m + E - b->V0) * c2 / 2.0;
    return {{1.0 + a * eps * eps, c2 * eps}, ka * std::log(eps), ka, ka + 1.0, c2};
  }
  if (const auto* c = std::get_if<potential_class::CoulombLike>(&md.cls)) {
    const double g = std::sqrt(md.k * md.k - c->f0 * c->f0);
    const double c2 = (g + md.k) / c->f0;
    return {{1.0, c2}, g * std::log(eps), g, g, c2};
  }
  const auto& s = std::get<potential_class::SubCoulomb>(md.cls);
  const double q = s.q;
  const double c2 = -s.v / (1.0 - q - 2.0 * md.k);
  const double d2 = (md.m - E) / (1.0 - 2.0 * md.k);
  const double a1 = s.v * c2 / (2.0 - 2.0 * q);
  const double p1 = ka, p2 = ka + 1.0 - q;
  return {{1.0 + a1 * std::pow(eps, 2.0 - 2.0 * q), c2 * std::pow(eps, 1.0 - q) + d2 * eps},
          p1 * std::log(eps),
          p1,
          p2,
          c2};
}

Start safe_start(const Model& md, double& E, double eps) {
  try {
    return origin_start(md, E, eps);
  } catch (const DomainError&) {
    E += 1e-12 * md.m;
    return origin_start(md, E, eps);
  }
}

double auto_r_min(const Model& md, const ShootingConfig& cfg) {
  if (md.line) return 0.0;
  return cfg.r_min > 0 ? cfg.r_min : 1e-6 * md.L;
}

double first_dt(const Model& md, double r_min) {
  return md.line ? 1e-3 * md.scale() : 1e-2 * r_min;
}

// Phase at r_c from both ends.
std::pair<double, double> phases(const Model& md, double E, double r_min, double r_max,
                                 double r_c, double tol) {
  const Start st = safe_start(md, E, std::max(r_min, 0.0));
  const auto sys = [&](const Phase& th, Phase& d, double r) { d[0] = md.dtheta(E, r, th[0]); };
  const double hmax = std::max(r_max / 50.0, md.scale());
  Phase out{std::atan2(st.psi[1], st.psi[0])};
  drive(sys, out, r_min, r_c, first_dt(md, r_min), tol, hmax, [](const Phase&, double) {
    return false;
  });
  Phase in{std::atan(md.target_ratio(E))};
  drive(sys, in, r_max, r_c, -0.01 * md.scale(), tol, hmax, [](const Phase&, double) {
    return false;
  });
  return {out[0], in[0]};
}

double default_match(const Model& md, double E, double r_min, double r_max) {
  double rc = md.L;
  // Outermost zero of m - E + V: walk out until positive, then bisect back.
  auto g = [&](double r) { return md.m - E + md.pot(r); };
  if (g(std::max(r_min, 1e-12 * md.L)) < 0) {
    double hi = md.L;
    for (int i = 0; i < 60 && g(hi) <= 0; ++i) hi *= 2.0;
    if (g(hi) > 0) {
      const auto br = find_sign_changes(g, 0.0, hi, 256);
      if (!br.empty()) rc = refine_root(g, br.back().lo, br.back().hi, 1e-10 * hi);
    }
  }
  const double lo = std::max(10.0 * r_min, 1e-3 * md.scale());
  return std::clamp(rc, lo, 0.5 * r_max);
}

double auto_r_max_initial(const Model& md, const ShootingConfig& cfg) {
  return std::max(cfg.decay_lengths / md.m, 25.0 * md.L);
}

struct Piece {
  std::vector<double> r, y1, y2, ls;
};

Piece integrate_linear(const Model& md, double E, Spinor y, double log_scale, double r0,
                       double r1, double dt0, double tol, double hmax) {
  Piece pc;
  auto record = [&](const Spinor& s, double r) {
    pc.r.push_back(r);
    pc.y1.push_back(s[0]);
    pc.y2.push_back(s[1]);
    pc.ls.push_back(log_scale);
  };
  record(y, r0);
  const auto sys = [&](const Spinor& s, Spinor& d, double r) { d = md.deriv(E, r, s); };
  drive(sys, y, r0, r1, dt0, tol, hmax, [&](Spinor& s, double r) {
    const double sup = std::max(std::abs(s[0]), std::abs(s[1]));
    bool rescaled = false;
    if (sup > 1e3 || (sup < 1e-3 && sup > 0)) {
      s[0] /= sup;
      s[1] /= sup;
      log_scale += std::log(sup);
      rescaled = true;
    }
    record(s, r);
    return rescaled;
  });
  return pc;
}

int sign_changes(const std::vector<double>& v, double rel) {
  double sup = 0.0;
  for (double x : v) sup = std::max(sup, std::abs(x));
  const double thr = rel * sup;
  int n = 0, last = 0;
  for (double x : v) {
    if (std::abs(x) <= thr) continue;
    const int s = x > 0 ? 1 : -1;
    if (last != 0 && s != last) ++n;
    last = s;
  }
  return n;
}

// Gauss-Legendre 4-point nodes/weights on [0, 1].
constexpr std::array<double, 4> kGlX = {0.0694318442029737, 0.3300094782075719,
                                        0.6699905217924281, 0.9305681557970263};
constexpr std::array<double, 4> kGlW = {0.1739274225687269, 0.3260725774312731,
                                        0.3260725774312731, 0.1739274225687269};

double hermite(double y0, double d0, double y1, double d1, double h, double t) {
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * h * d0 + (-2 * t3 + 3 * t2) * y1 +
         (t3 - t2) * h * d1;
}

}  // namespace

Spinor rhs(const Problem& p, double E, double r, Spinor psi) {
  const Model md(p);
  if (md.line) {
    const double v = md.pot(r);
    return {-(E + md.m - v) * psi[1], (E - md.m - v) * psi[0]};
  }
  if (!(r > 0)) throw DomainError("radial equations are singular at r = 0");
  return md.deriv(E, r, psi);
}

SeriesStart series_start(const Problem& p, double E, double eps) {
  const Model md(p);
  check_supported(md);
  if (md.line) return {{1.0, 0.0}, 0.0, 1.0, 0.0};
  if (!(eps > 0)) throw DomainError("series start needs eps > 0");
  const Start s = origin_start(md, E, eps);
  const double f = std::exp(s.log_scale);
  return {{s.psi[0] * f, s.psi[1] * f}, s.p1, s.p2, s.ratio};
}

Trajectory integrate_out(const Problem& p, double E, const ShootingConfig& cfg) {
  const Model md(p);
  check_supported(md);
  const double r_min = auto_r_min(md, cfg);
  const double r_max = cfg.r_max > 0 ? cfg.r_max : auto_r_max_initial(md, cfg);
  const Start st = origin_start(md, E, r_min);
  const double hmax = std::max(md.scale() / 8.0, r_max / 20000.0);
  Piece pc = integrate_linear(md, E, st.psi, st.log_scale, r_min, r_max, first_dt(md, r_min),
                              cfg.ode_tol, hmax);
  Trajectory t;
  t.r = std::move(pc.r);
  t.psi1 = std::move(pc.y1);
  t.psi2 = std::move(pc.y2);
  t.log_scale = std::move(pc.ls);
  for (std::size_t i = 1; i < t.log_scale.size(); ++i)
    if (t.log_scale[i] != t.log_scale[i - 1]) ++t.rescales;
  if (md.line)
    for (double& v : t.psi2) v = -v;
  return t;
}

double mismatch(const Problem& p, double E, const ShootingConfig& cfg) {
  const Model md(p);
  const Trajectory t = integrate_out(p, E, cfg);
  const double y1 = t.psi1.back();
  const double y2 = md.line ? -t.psi2.back() : t.psi2.back();
  if (y1 == 0.0) return y2 >= 0 ? std::numeric_limits<double>::infinity()
                                : -std::numeric_limits<double>::infinity();
  return y2 / y1 - md.target_ratio(E);
}

double phase_mismatch(const Problem& p, double E, const ShootingConfig& cfg,
                      std::optional<double> r_match) {
  const Model md(p);
  check_supported(md);
  const double r_min = auto_r_min(md, cfg);
  const double r_max = cfg.r_max > 0 ? cfg.r_max : auto_r_max_initial(md, cfg);
  const double rc = r_match ? *r_match : default_match(md, E, r_min, r_max);
  const auto [out, in] = phases(md, E, r_min, r_max, rc, cfg.ode_tol);
  return out - in;
}

Spinor WaveSolution::at(double r) const {
  if (one_dim && r < 0) {
    const Spinor s = at(-r);
    return {s[0], -s[1]};
  }
  if (grid.empty()) return {0.0, 0.0};
  if (r <= grid.front()) {
    if (one_dim || r == grid.front()) return {psi1.front(), psi2.front()};
    if (r <= 0) return {0.0, 0.0};
    const double x = r / grid.front();
    return {psi1.front() * std::pow(x, p1), psi2.front() * std::pow(x, p2)};
  }
  if (r >= grid.back()) {
    const double f = std::exp(-decay * (r - grid.back()));
    return {psi1.back() * f, psi2.back() * f};
  }
  const auto it = std::upper_bound(grid.begin(), grid.end(), r);
  const std::size_t i = static_cast<std::size_t>(it - grid.begin()) - 1;
  const double h = grid[i + 1] - grid[i];
  const double t = (r - grid[i]) / h;
  return {hermite(psi1[i], dpsi1[i], psi1[i + 1], dpsi1[i + 1], h, t),
          hermite(psi2[i], dpsi2[i], psi2[i + 1], dpsi2[i + 1], h, t)};
}

WaveSolution solve_ground(const Problem& p, const ShootingConfig& cfg) {
  const Model md(p);
  check_supported(md);
  const double m = md.m;
  const double delta = 1e-9 * m;
  const double lo = -m + delta, hi = m - delta;
  const double r_min = auto_r_min(md, cfg);
  double r_max = cfg.r_max > 0 ? cfg.r_max : auto_r_max_initial(md, cfg);

  int evals = 0;
  double E = 0.0, rc = 0.0;
  for (int pass = 0; pass < 8; ++pass) {
    const double scan_rc = std::clamp(md.L, std::max(10.0 * r_min, 1e-3 * md.scale()),
                                      0.5 * r_max);
    auto f_scan = [&](double e) {
      ++evals;
      const auto [a, b] = phases(md, e, r_min, r_max, scan_rc, cfg.ode_tol);
      return a - b;
    };
    const int n = std::max(cfg.scan_points, 2);
    double e_prev = lo, f_prev = f_scan(lo);
    if (f_prev <= 0) throw NoBoundState("no bound state in window");
    double b_lo = 0, b_hi = 0;
    bool found = false;
    for (int i = 1; i < n; ++i) {
      const double e = lo + (hi - lo) * i / (n - 1);
      const double fe = f_scan(e);
      if (fe <= 0) {
        b_lo = e_prev;
        b_hi = e;
        found = true;
        break;
      }
      e_prev = e;
      f_prev = fe;
    }
    if (!found) throw NoBoundState("no bound state in window");

    rc = default_match(md, 0.5 * (b_lo + b_hi), r_min, r_max);
    auto f = [&](double e) {
      ++evals;
      const auto [a, b] = phases(md, e, r_min, r_max, rc, cfg.ode_tol);
      return a - b;
    };
    double fa = f(b_lo), fb = f(b_hi);
    if (fb == 0) {
      E = b_hi;
    } else if (fa <= 0 || fb > 0) {
      // Bracket lost at the new matching point; fall back to the scan point.
      rc = scan_rc;
      fa = f(b_lo);
      fb = f(b_hi);
    }
    if (fb != 0) {
      std::uintmax_t iters = static_cast<std::uintmax_t>(cfg.max_bisections);
      const double etol = cfg.energy_tol;
      auto done = [etol](double x, double y) { return std::abs(y - x) <= etol; };
      const auto r = boost::math::tools::toms748_solve(f, b_lo, b_hi, fa, fb, done, iters);
      if (!done(r.first, r.second)) throw SolverError("energy refinement did not converge");
      E = 0.5 * (r.first + r.second);
    }
    if (cfg.r_max > 0 || md.decay(E) * r_max >= cfg.decay_lengths) break;
    r_max = 1.2 * cfg.decay_lengths / std::max(md.decay(E), 1e-12);
    if (pass == 7) throw SolverError("decay length does not fit the truncation radius");
  }

  // Wave function: outward to r_c, inward from r_max, joined on psi1.
  const double k = md.decay(E);
  const double hmax = std::max(std::min(md.scale(), 1.0 / std::max(k, 1e-12)) / 8.0,
                               r_max / 20000.0);
  double e_start = E;
  const Start st = safe_start(md, e_start, r_min);
  Piece out = integrate_linear(md, E, st.psi, st.log_scale, r_min, rc, first_dt(md, r_min),
                               cfg.ode_tol, hmax);
  Piece in = integrate_linear(md, E, {1.0, md.target_ratio(E)}, 0.0, r_max, rc,
                              -0.01 * md.scale(), cfg.ode_tol, hmax);
  const double ls_ref = out.ls.back();
  const double y_out = out.y1.back();
  const double y_in = in.y1.back() * std::exp(in.ls.back() - ls_ref);
  if (!(y_out != 0 && y_in != 0 && std::isfinite(y_in)))
    throw SolverError("matching failed: psi1 vanishes at the matching point");
  const double join = y_out / y_in;

  WaveSolution s;
  s.energy = E;
  s.mass = m;
  s.kappa = md.k;
  s.one_dim = md.line;
  s.potential_class = md.cls;
  s.r_min = r_min;
  s.r_max = r_max;
  s.decay = k;
  s.p1 = st.p1;
  s.p2 = st.p2;
  s.r_match = rc;
  s.energy_evaluations = evals;

  std::vector<double> r, y1, y2;
  const std::size_t n_out = out.r.size(), n_in = in.r.size();
  r.reserve(n_out + n_in);
  for (std::size_t i = 0; i < n_out; ++i) {
    const double f = std::exp(out.ls[i] - ls_ref);
    r.push_back(out.r[i]);
    y1.push_back(out.y1[i] * f);
    y2.push_back(out.y2[i] * f);
  }
  for (std::size_t j = n_in - 1; j-- > 0;) {  // skip the duplicate r_c sample
    const double f = join * std::exp(in.ls[j] - ls_ref);
    if (!(in.r[j] > r.back())) continue;
    r.push_back(in.r[j]);
    y1.push_back(in.y1[j] * f);
    y2.push_back(in.y2[j] * f);
  }

  // Normalise: exact GL4 on the Hermite cubic, analytic origin and tail pieces.
  const std::size_t n = r.size();
  std::vector<double> d1(n), d2(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Spinor d = md.deriv(E, md.line && r[i] == 0 ? 0.0 : r[i], {y1[i], y2[i]});
    d1[i] = d[0];
    d2[i] = d[1];
  }
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double h = r[i + 1] - r[i];
    double acc = 0.0;
    for (int q = 0; q < 4; ++q) {
      const double a = hermite(y1[i], d1[i], y1[i + 1], d1[i + 1], h, kGlX[q]);
      const double b = hermite(y2[i], d2[i], y2[i + 1], d2[i + 1], h, kGlX[q]);
      acc += kGlW[q] * (a * a + b * b);
    }
    total += acc * h;
  }
  if (!md.line)
    total += y1.front() * y1.front() * r_min / (2 * st.p1 + 1) +
             y2.front() * y2.front() * r_min / (2 * st.p2 + 1);
  total += (y1.back() * y1.back() + y2.back() * y2.back()) / (2.0 * k);
  if (md.line) total *= 2.0;
  const double c = 1.0 / std::sqrt(total);
  for (std::size_t i = 0; i < n; ++i) {
    y1[i] *= c;
    y2[i] *= c;
    d1[i] *= c;
    d2[i] *= c;
  }

  const int n1 = sign_changes(y1, 1e-7), n2 = sign_changes(y2, 1e-7);
  if (md.line) {
    for (std::size_t i = 0; i < n; ++i) {
      y2[i] = -y2[i];
      d2[i] = -d2[i];
    }
  }
  s.grid = std::move(r);
  s.psi1 = std::move(y1);
  s.psi2 = std::move(y2);
  s.dpsi1 = std::move(d1);
  s.dpsi2 = std::move(d2);
  s.nodes1 = n1;
  s.nodes2 = md.line ? n2 + 1 : n2;
  if (n1 != 0 || n2 != 0) throw SolverError("converged to excited state");

  // Independent check of the normalisation by adaptive quadrature.
  std::vector<double> breaks;
  for (std::size_t i = 0; i < s.grid.size(); i += 16) breaks.push_back(s.grid[i]);
  if (breaks.back() != s.grid.back()) breaks.push_back(s.grid.back());
  const auto dens = [&s](double x) {
    const Spinor v = s.at(x);
    return v[0] * v[0] + v[1] * v[1];
  };
  double chk = integrate_panels(dens, breaks, 1e-12).value;
  if (!md.line)
    chk += s.psi1.front() * s.psi1.front() * r_min / (2 * s.p1 + 1) +
           s.psi2.front() * s.psi2.front() * r_min / (2 * s.p2 + 1);
  chk += (s.psi1.back() * s.psi1.back() + s.psi2.back() * s.psi2.back()) / (2.0 * k);
  s.norm = md.line ? 2.0 * chk : chk;
  return s;
}

NodeCount count_nodes(const std::vector<double>& psi1, const std::vector<double>& psi2,
                      double rel_threshold) {
  return {sign_changes(psi1, rel_threshold), sign_changes(psi2, rel_threshold)};
}

NodeCount count_nodes(const Trajectory& t, double rel_threshold) {
  // Bring samples to a common scale relative to the largest log-scale.
  double ref = -std::numeric_limits<double>::infinity();
  for (double l : t.log_scale) ref = std::max(ref, l);
  std::vector<double> a(t.r.size()), b(t.r.size());
  for (std::size_t i = 0; i < t.r.size(); ++i) {
    const double f = std::exp(t.log_scale[i] - ref);
    a[i] = t.psi1[i] * f;
    b[i] = t.psi2[i] * f;
  }
  return count_nodes(a, b, rel_threshold);
}

LemmaReport lemma_monotonicity_check(const WaveSolution& s, std::optional<double> w2) {
  LemmaReport rep;
  const double ka = std::abs(s.kappa);
  rep.w1 = ka;
  rep.w2 = w2 ? *w2
              : (std::holds_alternative<potential_class::CoulombLike>(s.potential_class) ? ka
                                                                                        : ka + 1);
  const std::size_t n = s.grid.size();
  std::vector<double> R1(n), R2(n);
  double s1 = 0, s2 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    R1[i] = s.psi1[i] / std::pow(s.grid[i], rep.w1);
    R2[i] = s.psi2[i] / std::pow(s.grid[i], rep.w2);
    s1 = std::max(s1, std::abs(R1[i]));
    s2 = std::max(s2, std::abs(R2[i]));
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    rep.violation1 = std::max(rep.violation1, (R1[i + 1] - R1[i]) / s1);
    rep.violation2 = std::max(rep.violation2, (R2[i] - R2[i + 1]) / s2);
  }
  return rep;
}

EffectiveMassRoot sign_change_of_effective_mass(const Problem& p, double E) {
  const Model md(p);
  EffectiveMassRoot out;
  auto g = [&](double r) { return md.m - E + md.pot(r); };
  double hi = md.L;
  for (int i = 0; i < 60 && g(hi) <= 0; ++i) hi *= 2.0;
  const auto br = find_sign_changes(g, 0.0, 4.0 * hi, 512);
  for (const auto& b : br) out.roots.push_back(refine_root(g, b.lo, b.hi, 1e-12 * hi));
  out.unique = out.roots.size() == 1;
  if (out.roots.empty())
    out.note = "no interior sign change";
  else if (!out.unique)
    out.note = "multiple sign changes";
  return out;
}

bool phi2_single_maximum(const WaveSolution& s) {
  if (!s.one_dim) return false;
  return sign_changes(s.dpsi2, 1e-7) == 1;
}

}  // namespace dirac
