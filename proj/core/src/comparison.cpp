#include "dirac/comparison.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <memory>
#include <numbers>

#include <fmt/format.h>

#include "dirac/errors.hpp"

namespace dirac {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Asymptotic decay of a family: power law x^{-power} or exp(-rate x).
struct Decay {
  double power = kInf;
  double rate = kInf;  // meaningful when power is infinite
  bool tabulated = false;
};

Decay family_decay(const PotentialSpec& p) {
  using namespace family;
  return std::visit(
      overloaded{
          [](const Exponential& f) { return f.beta == 0 ? Decay{} : Decay{kInf, f.b}; },
          [](const LaserDressed& f) { return f.alpha == 0 ? Decay{} : Decay{1.0, 0.0}; },
          [](const WoodsSaxon& f) { return f.v == 0 ? Decay{} : Decay{kInf, 1.0 / f.a}; },
          [](const Coulomb& f) { return f.v == 0 ? Decay{} : Decay{1.0, 0.0}; },
          [](const Yukawa& f) { return f.v == 0 ? Decay{} : Decay{kInf, f.lambda}; },
          [](const Hulthen& f) { return f.v == 0 ? Decay{} : Decay{kInf, f.lambda}; },
          [](const SechSquared& f) { return f.beta == 0 ? Decay{} : Decay{kInf, 2.0 * f.b}; },
          [](const PowerSingular& f) { return f.v == 0 ? Decay{} : Decay{f.q, 0.0}; },
          [](const OscCubic& f) { return f.alpha == 0 ? Decay{} : Decay{3.0, 0.0}; },
          [](const RationalCubic& f) { return f.beta == 0 ? Decay{} : Decay{3.0, 0.0}; },
          [](const Tabulated&) { return Decay{kInf, kInf, true}; },
      },
      p.family());
}

Decay difference_decay(const PotentialSpec& a, const PotentialSpec& b) {
  const Decay da = family_decay(a), db = family_decay(b);
  Decay d;
  d.tabulated = da.tabulated || db.tabulated;
  d.power = std::min(da.power, db.power);
  d.rate = std::min(da.rate, db.rate);
  return d;
}

double weight_power(WeightKind k, double kabs) {
  switch (k) {
    case WeightKind::R2K:
      return 2.0 * kabs;
    default:
      return 0.0;
  }
}

// Matched OscCubic / RationalCubic pair: V_b - V_a vanishes exactly at the
// zeros of sin(kappa r^3 + s).
const family::OscCubic* matched_lobes(const ComparisonCase& c) {
  auto match = [](const PotentialSpec& x, const PotentialSpec& y) -> const family::OscCubic* {
    const auto* o = std::get_if<family::OscCubic>(&x.family());
    const auto* r = std::get_if<family::RationalCubic>(&y.family());
    if (!o || !r) return nullptr;
    if (o->alpha != r->beta || o->a != r->b || o->u != r->w) return nullptr;
    if (o->alpha == 0 || o->v == 0) return nullptr;
    return o;
  };
  if (const auto* o = match(c.a.potential, c.b.potential)) return o;
  return match(c.b.potential, c.a.potential);
}

// k-th zero of sin(kappa r^3 + s) on r > 0, counted from the first.
std::vector<double> lobe_zeros(const family::OscCubic& o, int count) {
  std::vector<double> z;
  const double pi = std::numbers::pi;
  int k = static_cast<int>(std::floor(o.s / pi)) + 1;
  for (int i = 0; i < count; ++i, ++k) z.push_back(std::cbrt((k * pi - o.s) / o.kappa));
  return z;
}

double delta_v(const ComparisonCase& c, double t) { return c.b.potential(t) - c.a.potential(t); }

int sign_of(double x) { return (x > 0) - (x < 0); }

std::vector<double> log_points(double lo, double hi, int n) {
  std::vector<double> r;
  const double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < n; ++i) r.push_back(std::exp(a + (b - a) * i / (n - 1)));
  return r;
}

}  // namespace

std::string_view weight_name(WeightKind k) {
  switch (k) {
    case WeightKind::Unit: return "unit";
    case WeightKind::Phi1Base: return "phi1";
    case WeightKind::TPhi2Base: return "t_phi2";
    case WeightKind::R2K: return "r^2|k|";
    case WeightKind::Psi1RK: return "psi1 r^|k|";
    case WeightKind::NegPsi2RK1: return "-psi2 r^(|k|+1)";
    case WeightKind::NegPsi2RK: return "-psi2 r^|k|";
  }
  return "?";
}

bool weight_needs_base(WeightKind k) { return k != WeightKind::Unit && k != WeightKind::R2K; }

std::vector<WeightKind> theorem_weights(Theorem t) {
  switch (t) {
    case Theorem::T1: return {WeightKind::Unit};
    case Theorem::T2: return {WeightKind::Phi1Base, WeightKind::TPhi2Base};
    case Theorem::T3: return {WeightKind::R2K};
    case Theorem::T5: return {WeightKind::Psi1RK, WeightKind::NegPsi2RK};
    case Theorem::T4:
    case Theorem::T6:
    case Theorem::T7: return {WeightKind::Psi1RK, WeightKind::NegPsi2RK1};
  }
  return {};
}

std::optional<CoulombGround> exact_oracle(const Problem& p) {
  const auto* c = std::get_if<family::Coulomb>(&p.potential.family());
  if (!c || is_one_dim(p.geometry) || geometry_kappa(p.geometry) != -1.0) return std::nullopt;
  if (!(c->v > 0 && c->v < 1)) return std::nullopt;
  return CoulombGround(c->v, p.mass);
}

BaseWave base_from(const WaveSolution& s) {
  auto sp = std::make_shared<const WaveSolution>(s);
  return {[sp](double r) { return sp->at(r); }, s.energy, s.decay, false};
}

BaseWave base_from(const CoulombGround& g) {
  return {[g](double r) { return g.at(r); }, g.energy(), g.decay(), true};
}

CrossingInfo crossings(const ComparisonCase& c, double r_hi, const ComparisonOptions& opts) {
  const double L = std::max(c.a.potential.characteristic_length(),
                            c.b.potential.characteristic_length());
  CrossingInfo info;
  info.r_hi = r_hi > 0 ? r_hi : std::max(60.0 * L, 40.0);
  auto f = [&c](double t) { return delta_v(c, t); };

  if (const auto* o = matched_lobes(c)) {
    info.analytic_lobes = true;
    info.lobes_truncated = true;
    info.points = lobe_zeros(*o, opts.max_lobes);
    info.r_hi = info.points.back();
    info.first_sign = sign_of(f(0.5 * info.points.front()));
    return info;
  }

  // Unmatched oscillating potentials: stop where the lobe count would exceed the cap.
  int probes = 4000;
  for (const auto* p : {&c.a.potential, &c.b.potential}) {
    if (const auto* o = std::get_if<family::OscCubic>(&p->family()); o && o->v != 0) {
      const double r_cap = std::cbrt((opts.max_lobes * std::numbers::pi + o->s) / o->kappa);
      if (r_cap < info.r_hi) {
        info.r_hi = r_cap;
        info.lobes_truncated = true;
      }
      probes = std::max(probes, 20 * opts.max_lobes);
    }
  }

  for (const auto& br : find_sign_changes(f, 0.0, info.r_hi, probes))
    info.points.push_back(refine_root(f, br.lo, br.hi, opts.root_tol));
  std::sort(info.points.begin(), info.points.end());

  if (!info.points.empty()) {
    info.first_sign = sign_of(f(0.5 * info.points.front()));
  } else {
    for (double t : log_points(1e-6 * L, info.r_hi, 400)) {
      if (const int s = sign_of(f(t)); s != 0) {
        info.first_sign = s;
        break;
      }
    }
  }
  return info;
}

Integrand weighted_integrand(const ComparisonCase& c, WeightKind kind, const BaseWave* base) {
  if (weight_needs_base(kind) && base == nullptr)
    throw std::invalid_argument("weight needs the base wave function");
  const double kabs = std::abs(geometry_kappa(c.a.geometry));
  const auto* pa = &c.a.potential;
  const auto* pb = &c.b.potential;
  auto dv = [pa, pb](double t) { return (*pb)(t) - (*pa)(t); };
  switch (kind) {
    case WeightKind::Unit:
      return dv;
    case WeightKind::R2K:
      return [dv, kabs](double t) { return t > 0 ? dv(t) * std::pow(t, 2 * kabs) : 0.0; };
    default:
      break;
  }
  const auto psi = base->psi;
  switch (kind) {
    case WeightKind::Phi1Base:
      return [dv, psi](double t) { return t > 0 ? dv(t) * psi(t)[0] : 0.0; };
    case WeightKind::TPhi2Base:
      return [dv, psi](double t) { return t > 0 ? dv(t) * t * psi(t)[1] : 0.0; };
    case WeightKind::Psi1RK:
      return [dv, psi, kabs](double t) {
        return t > 0 ? dv(t) * psi(t)[0] * std::pow(t, kabs) : 0.0;
      };
    case WeightKind::NegPsi2RK1:
      return [dv, psi, kabs](double t) {
        return t > 0 ? -dv(t) * psi(t)[1] * std::pow(t, kabs + 1) : 0.0;
      };
    case WeightKind::NegPsi2RK:
      return [dv, psi, kabs](double t) {
        return t > 0 ? -dv(t) * psi(t)[1] * std::pow(t, kabs) : 0.0;
      };
    default:
      break;
  }
  throw std::logic_error("unhandled weight");
}

CumulativeCurve weighted_cumulative(const ComparisonCase& c, WeightKind kind,
                                    std::span<const double> grid, const BaseWave* base,
                                    double tol) {
  return cumulative_integral(weighted_integrand(c, kind, base), grid, tol);
}

std::optional<double> ComparisonContext::Ea() const {
  return sol_a ? std::optional(sol_a->energy) : std::nullopt;
}
std::optional<double> ComparisonContext::Eb() const {
  return sol_b ? std::optional(sol_b->energy) : std::nullopt;
}

ComparisonContext prepare(const ComparisonCase& c, const ComparisonOptions& opts) {
  ComparisonContext ctx{c, opts, {}, {}, {}, {}, {}, {}, 1.0};
  ctx.length = std::max(c.a.potential.characteristic_length(),
                        c.b.potential.characteristic_length());

  auto solve = [&opts](const Problem& p) { return solve_ground(p, opts.shooting); };
  auto fa = std::async(std::launch::async, solve, c.a);
  auto fb = std::async(std::launch::async, solve, c.b);
  auto collect = [](auto& fut, std::optional<WaveSolution>& sol, std::string& err) {
    try {
      sol = fut.get();
    } catch (const std::exception& e) {
      err = e.what();
    }
  };
  collect(fa, ctx.sol_a, ctx.error_a);
  collect(fb, ctx.sol_b, ctx.error_b);

  const Problem& bp = c.base_problem();
  std::optional<CoulombGround> oracle;
  if (opts.use_exact_oracle) {
    try {
      oracle = exact_oracle(bp);
    } catch (const std::exception&) {
    }
  }
  if (oracle) {
    ctx.base = base_from(*oracle);
  } else {
    const auto& s = c.base == Base::A ? ctx.sol_a : ctx.sol_b;
    if (s) ctx.base = base_from(*s);
  }
  ctx.cross = crossings(c, 0.0, opts);
  return ctx;
}

std::vector<double> curve_grid(const ComparisonContext& ctx, WeightKind kind) {
  const double L = ctx.length;
  const auto& pts = ctx.cross.points;
  std::vector<double> g{0.0};
  for (double t : log_points(1e-6 * L, L, 64)) g.push_back(t);

  double horizon;
  if (ctx.cross.analytic_lobes) {
    horizon = pts.back();
  } else {
    const double last = pts.empty() ? 0.0 : pts.back();
    horizon = std::max(2.0 * last, 30.0 * L);
    if (weight_needs_base(kind) && ctx.base && ctx.base->decay > 0)
      horizon = std::max(horizon, 40.0 / ctx.base->decay);
  }
  const double step = std::max(L / 40.0, (horizon - L) / 4000.0);
  for (double t = L + step; t < horizon; t += step) g.push_back(t);
  g.push_back(horizon);
  for (double x : pts)
    if (x < horizon) g.push_back(x);

  std::sort(g.begin(), g.end());
  std::vector<double> out;
  for (double t : g)
    if (out.empty() || t > out.back() * (1 + 1e-13) + 1e-300) out.push_back(t);
  // Keep crossings exact after dedup.
  for (double x : pts) {
    auto it = std::lower_bound(out.begin(), out.end(), x);
    if (it != out.end() && std::abs(*it - x) <= 1e-12 * x) *it = x;
    if (it != out.begin() && std::abs(*(it - 1) - x) <= 1e-12 * x) *(it - 1) = x;
  }
  return out;
}

namespace {

CurveReport build_curve(const ComparisonContext& ctx, WeightKind kind,
                        std::vector<std::string>& notes) {
  const auto& c = ctx.cs;
  const BaseWave* base = ctx.base ? &*ctx.base : nullptr;
  const auto f = weighted_integrand(c, kind, base);
  const auto grid = curve_grid(ctx, kind);

  CurveReport rep{kind, cumulative_integral(f, grid, ctx.opts.int_tol), 0, 0, 0, {}, false,
                  false, {}, {}, {}};
  double vmax = 0.0;
  for (double v : rep.curve.values) vmax = std::max(vmax, std::abs(v));
  rep.tol_cond = ctx.opts.cond_rel * vmax;
  rep.min_value = rep.curve.minimum.value;
  rep.min_location = rep.curve.minimum.location;
  const double horizon = grid.back();
  const double back = rep.curve.back();
  const int n = static_cast<int>(ctx.cross.points.size());
  const int tail_sign = ctx.cross.first_sign * (n % 2 == 0 ? 1 : -1);
  const std::string wn(weight_name(kind));

  if (ctx.cross.analytic_lobes) {
    // Alternating lobes beyond the cap: the remainder is bounded by the next lobe.
    const auto* o = matched_lobes(c);
    const auto z = lobe_zeros(*o, n + 1);
    const double next = integrate_adaptive(f, z[n - 1], z[n], ctx.opts.int_tol).value;
    if (next < 0) {
      rep.min_value = std::min(rep.min_value, back + next);
      if (back + next < rep.curve.minimum.value) rep.min_location = kInf;
    }
    rep.value_at_infinity = back + 0.5 * next;
    rep.tail_area = std::abs(next);
    notes.push_back(fmt::format("{}: {} lobes integrated, remainder bounded by {:.3g}", wn, n,
                                std::abs(next)));
  } else if (tail_sign != 0) {
    const Decay dv = difference_decay(c.a.potential, c.b.potential);
    const double kabs = std::abs(geometry_kappa(c.a.geometry));
    if (dv.tabulated) {
      notes.push_back(wn + ": tabulated potential, tail beyond the table skipped");
      rep.value_at_infinity = back;
    } else {
      DecayHint hint = DecayHint::power(0);
      if (weight_needs_base(kind)) {
        const double r = base->decay + (std::isinf(dv.power) ? dv.rate : 0.0);
        hint = DecayHint::exponential(0.5 * r);
      } else if (std::isinf(dv.power)) {
        hint = DecayHint::exponential(0.5 * dv.rate);
      } else {
        hint = DecayHint::power(dv.power - weight_power(kind, kabs));
      }
      try {
        if (hint.kind == DecayHint::Kind::Power && hint.rate <= 1.0)
          throw IntegrationError("tail grows without bound", back, kInf);
        const double tail = integrate_to_infinity(f, horizon, ctx.opts.int_tol, hint).value;
        rep.value_at_infinity = back + tail;
        if (back + tail < rep.min_value) {
          rep.min_value = back + tail;
          rep.min_location = kInf;
        }
      } catch (const IntegrationError&) {
        if (tail_sign < 0) {
          rep.tail_diverges_negative = true;
          rep.min_value = -kInf;
          rep.min_location = kInf;
          notes.push_back(wn + ": running integral diverges to -infinity");
        } else {
          notes.push_back(wn + ": running integral diverges to +infinity");
        }
      }
    }
  } else {
    rep.value_at_infinity = back;
  }

  // Interval areas between consecutive crossings (the grid contains them).
  if (n > 0) {
    double prev = 0.0;
    for (double x : ctx.cross.points) {
      const double v = rep.curve.at(x);
      rep.interval_areas.push_back(std::abs(v - prev));
      prev = v;
    }
    if (!ctx.cross.analytic_lobes && rep.value_at_infinity)
      rep.tail_area = std::abs(*rep.value_at_infinity - prev);
  }

  rep.holds = rep.min_value >= -rep.tol_cond;
  return rep;
}

TheoremVerdict start_verdict(const ComparisonContext& ctx, Theorem t, bool corollary) {
  TheoremVerdict v;
  v.theorem = t;
  v.corollary = corollary;
  v.applicability = check_preconditions(ctx.cs, t);
  v.Ea = ctx.Ea();
  v.Eb = ctx.Eb();
  if (!ctx.error_a.empty()) v.notes.push_back("problem a: " + ctx.error_a);
  if (!ctx.error_b.empty()) v.notes.push_back("problem b: " + ctx.error_b);
  return v;
}

// Can the curves be built at all? Records the reason when not.
bool curves_available(const ComparisonContext& ctx, Theorem t, TheoremVerdict& v) {
  if (!theorem_for_geometry(t, ctx.cs.a.geometry)) {
    v.notes.push_back("theorem not posed for this geometry");
    return false;
  }
  for (auto k : theorem_weights(t)) {
    if (weight_needs_base(k) && !ctx.base) {
      v.notes.push_back("base wave function unavailable");
      return false;
    }
  }
  return true;
}

void finish(const ComparisonContext& ctx, TheoremVerdict& v) {
  const bool predict = v.applicable() && v.condition_holds;
  v.predicted = predict ? Prediction::EaAtMostEb : Prediction::Inconclusive;
  v.consistent = !(predict && v.Ea && v.Eb && *v.Ea > *v.Eb + ctx.opts.shooting.energy_tol);
}

}  // namespace

TheoremVerdict check_theorem(const ComparisonContext& ctx, Theorem t) {
  auto v = start_verdict(ctx, t, false);
  if (curves_available(ctx, t, v)) {
    v.condition_holds = true;
    try {
      for (auto k : theorem_weights(t)) {
        v.curves.push_back(build_curve(ctx, k, v.notes));
        v.condition_holds = v.condition_holds && v.curves.back().holds;
      }
    } catch (const IntegrationError& e) {
      v.condition_holds = false;
      v.notes.push_back(std::string("integration failed: ") + e.what());
    }
  }
  finish(ctx, v);
  return v;
}

TheoremVerdict check_corollary(const ComparisonContext& ctx, Theorem t) {
  auto v = start_verdict(ctx, t, true);
  const auto& cr = ctx.cross;
  const int n = static_cast<int>(cr.points.size());

  if (!curves_available(ctx, t, v)) {
    finish(ctx, v);
    return v;
  }
  if (n == 0 && cr.first_sign >= 0) {
    v.shortcut = cr.first_sign == 0 ? "identical" : "ordered";
    v.condition_holds = true;
    finish(ctx, v);
    return v;
  }
  if (cr.first_sign < 0) {
    v.shortcut = "none";
    v.notes.push_back("V_a > V_b next to the origin");
    finish(ctx, v);
    return v;
  }

  v.shortcut = cr.analytic_lobes ? "lobes"
               : n == 1          ? "one_crossing"
               : n == 2          ? "two_crossings"
                                 : "alternating_areas";
  v.condition_holds = true;
  try {
    for (auto k : theorem_weights(t)) {
      auto rep = build_curve(ctx, k, v.notes);
      bool ok = false;
      if (n == 1) {
        if (rep.value_at_infinity) {
          rep.shortcut_value = rep.value_at_infinity;
          ok = *rep.value_at_infinity >= -rep.tol_cond;
        } else {
          ok = !rep.tail_diverges_negative;
        }
      } else if (n == 2 && !cr.analytic_lobes) {
        rep.shortcut_value = rep.curve.at(cr.points[1]);
        ok = *rep.shortcut_value >= -rep.tol_cond;
      } else {
        const auto& A = rep.interval_areas;
        ok = true;
        for (std::size_t i = 0; i + 1 < A.size(); ++i)
          if (A[i + 1] > A[i] + rep.tol_cond) ok = false;
        if (n % 2 == 1 || cr.analytic_lobes) {
          if (rep.tail_area)
            ok = ok && A.back() + rep.tol_cond >= *rep.tail_area;
          else
            ok = ok && !rep.tail_diverges_negative && n % 2 == 0;
        }
      }
      rep.holds = ok;
      v.condition_holds = v.condition_holds && ok;
      v.curves.push_back(std::move(rep));
    }
  } catch (const IntegrationError& e) {
    v.condition_holds = false;
    v.notes.push_back(std::string("integration failed: ") + e.what());
  }
  finish(ctx, v);
  return v;
}

TheoremVerdict check_theorem(const ComparisonCase& c, Theorem t, const ComparisonOptions& opts) {
  return check_theorem(prepare(c, opts), t);
}

TheoremVerdict check_corollary(const ComparisonCase& c, Theorem t,
                               const ComparisonOptions& opts) {
  return check_corollary(prepare(c, opts), t);
}

double verify_identity(const ComparisonCase& c, const WaveSolution& a, const WaveSolution& b) {
  const double hi = std::max(a.r_max, b.r_max);
  auto overlap = [&a, &b](double t) {
    const auto x = a.at(t), y = b.at(t);
    return x[0] * y[0] + x[1] * y[1];
  };
  auto weighted = [&](double t) { return t > 0 ? delta_v(c, t) * overlap(t) : 0.0; };

  std::vector<double> br{0.0};
  const double lo = std::max(a.r_min, b.r_min) > 0 ? std::max(a.r_min, b.r_min) : 1e-6 * hi;
  for (double t : log_points(lo, hi, 200))
    if (t > br.back() && t < hi) br.push_back(t);
  br.push_back(hi);
  AdaptiveOptions o;
  o.grade_left = true;
  const double ov = integrate_panels(overlap, br, 1e-12, o).value;
  const double wv = integrate_panels(weighted, br, 1e-12, o).value;
  const double lhs = (b.energy - a.energy) * ov;
  return std::abs(lhs - wv) / std::max({std::abs(lhs), std::abs(wv), 1e-12});
}

ComparisonReport end_to_end(const ComparisonCase& c, const ComparisonOptions& opts,
                            std::optional<Theorem> only) {
  ComparisonReport rep{prepare(c, opts), {}, {}, true};
  std::vector<Theorem> ts;
  if (only) {
    ts.push_back(*only);
  } else {
    for (int i = 1; i <= 7; ++i)
      if (theorem_for_geometry(theorem_from_number(i), c.a.geometry))
        ts.push_back(theorem_from_number(i));
  }
  for (auto t : ts) {
    rep.verdicts.push_back(check_theorem(rep.ctx, t));
    rep.verdicts.push_back(check_corollary(rep.ctx, t));
  }
  if (rep.ctx.sol_a && rep.ctx.sol_b)
    rep.identity_residual = verify_identity(c, *rep.ctx.sol_a, *rep.ctx.sol_b);
  for (const auto& v : rep.verdicts) rep.all_consistent = rep.all_consistent && v.consistent;
  return rep;
}

}  // namespace dirac
