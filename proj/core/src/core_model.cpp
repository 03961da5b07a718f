#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "dirac/core_model.hpp"
#include "dirac/errors.hpp"

namespace dirac {

HalfInteger HalfInteger::from_twice(int twice) {
  if (twice % 2 == 0) throw DomainError("j must be a half-integer");
  return HalfInteger(twice);
}

HalfInteger HalfInteger::from_double(double value) {
  const double t = 2.0 * value;
  if (!std::isfinite(t) || std::abs(t - std::round(t)) > 1e-12)
    throw DomainError("j must be a half-integer");
  return from_twice(static_cast<int>(std::lround(t)));
}

double kappa(int d, HalfInteger j, int tau) {
  if (d < 2) throw DomainError("kappa needs d >= 2");
  if (j.twice() < 1) throw DomainError("j must be >= 1/2");
  if (tau != 1 && tau != -1) throw DomainError("tau must be +1 or -1");
  // 2j + d - 2 is an exact integer, halve once.
  return tau * 0.5 * (j.twice() + d - 2);
}

double kappa(int d, double j, int tau) { return kappa(d, HalfInteger::from_double(j), tau); }

AngularSector::AngularSector(int d, HalfInteger j, int tau)
    : d_(d), j_(j), tau_(tau), kappa_(dirac::kappa(d, j, tau)) {}

double geometry_kappa(const Geometry& g) {
  if (const auto* s = std::get_if<AngularSector>(&g)) return s->kappa();
  return 0.0;
}

Problem::Problem(double m, Geometry g, PotentialSpec p)
    : mass(m), geometry(std::move(g)), potential(std::move(p)) {
  if (!(mass > 0.0) || !std::isfinite(mass)) throw std::invalid_argument("mass must be positive");
}

ComparisonCase::ComparisonCase(Problem pa, Problem pb, Base which)
    : a(std::move(pa)), b(std::move(pb)), base(which) {
  if (a.mass != b.mass) throw std::invalid_argument("comparison problems must share the mass");
  if (!(a.geometry == b.geometry))
    throw std::invalid_argument("comparison problems must share the geometry");
}

ComparisonCase ComparisonCase::swapped() const {
  return ComparisonCase(b, a, base == Base::A ? Base::B : Base::A);
}

Theorem theorem_from_number(int n) {
  if (n < 1 || n > 7) throw std::invalid_argument("theorem number must be in 1..7");
  return static_cast<Theorem>(n);
}

bool theorem_for_geometry(Theorem t, const Geometry& g) {
  const bool line = theorem_number(t) <= 2;
  return line == is_one_dim(g);
}

std::vector<std::string> ApplicabilityReport::failed() const {
  std::vector<std::string> out;
  for (const auto& c : conditions)
    if (!c.holds) out.push_back(c.name);
  return out;
}

namespace {

std::string fmt_double(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

std::vector<double> log_samples(double lo, double hi, int n) {
  std::vector<double> r(static_cast<std::size_t>(n));
  const double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < n; ++i) r[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * i / (n - 1));
  return r;
}

struct Sampled {
  bool nonpositive = true;
  bool nondecreasing = true;
  bool f_nonincreasing = true;  // f = -r V
  double worst_positive = 0.0;
};

Sampled sample(const PotentialSpec& p, const std::vector<double>& r) {
  Sampled s;
  double scale = 0.0;
  std::vector<double> v(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    v[i] = p(r[i]);
    scale = std::max(scale, std::abs(v[i]));
  }
  const double tol = 1e-12 * std::max(scale, 1.0);
  double fscale = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) fscale = std::max(fscale, std::abs(r[i] * v[i]));
  const double ftol = 1e-12 * std::max(fscale, 1.0);
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (v[i] > tol) {
      s.nonpositive = false;
      s.worst_positive = std::max(s.worst_positive, v[i]);
    }
    if (i > 0) {
      if (v[i] < v[i - 1] - tol) s.nondecreasing = false;
      if (-r[i] * v[i] > -r[i - 1] * v[i - 1] + ftol) s.f_nonincreasing = false;
    }
  }
  return s;
}

enum class Need { Bounded, CoulombLike, SubCoulomb, AnyAdmitted };

}  // namespace

ApplicabilityReport check_preconditions(const ComparisonCase& c, Theorem t,
                                        const PreconditionOptions& opts) {
  ApplicabilityReport rep{t, {}, false};
  auto add = [&](std::string name, bool holds, std::string detail = {}) {
    rep.conditions.push_back({std::move(name), holds, std::move(detail)});
  };

  const bool line = is_one_dim(c.a.geometry);
  add("geometry", theorem_for_geometry(t, c.a.geometry),
      line ? "posed on the line" : "posed in d > 1");
  if (!line) {
    const double k = geometry_kappa(c.a.geometry);
    add("nodeless_sector", k < 0, "kappa = " + fmt_double(k));
  }
  if (line) add("even", true, "potentials are extended evenly to the full line");

  const double r_hi = opts.sample_r_hi > 0
                          ? opts.sample_r_hi
                          : 50.0 * std::max(c.a.potential.characteristic_length(),
                                            c.b.potential.characteristic_length());
  const auto grid = log_samples(opts.sample_r_lo, std::max(r_hi, 10 * opts.sample_r_lo),
                                opts.monotone_samples);
  const double m = c.a.mass;
  const double kabs = std::abs(geometry_kappa(c.a.geometry));

  Need need = Need::Bounded;
  bool depth = false, monotone = false, f_monotone = false;
  switch (t) {
    case Theorem::T1:
    case Theorem::T3:
      depth = true;
      break;
    case Theorem::T2:
    case Theorem::T4:
      monotone = true;
      break;
    case Theorem::T5:
      need = Need::CoulombLike;
      f_monotone = true;
      break;
    case Theorem::T6:
      need = Need::SubCoulomb;
      monotone = true;
      break;
    case Theorem::T7:
      need = Need::AnyAdmitted;
      break;
  }

  for (int which = 0; which < 2; ++which) {
    const Problem& p = which == 0 ? c.a : c.b;
    const std::string tag = which == 0 ? "_a" : "_b";
    const auto cls = classify(p.potential);
    const auto s = sample(p.potential, grid);

    add("nonpositive" + tag, s.nonpositive,
        s.nonpositive ? "" : "max V = " + fmt_double(s.worst_positive));
    const auto* uns = std::get_if<potential_class::Unsupported>(&cls);
    add("vanishes_at_infinity" + tag, uns == nullptr, uns ? uns->reason : "");

    const bool is_bounded = std::holds_alternative<potential_class::Bounded>(cls);
    const bool is_coulomb = std::holds_alternative<potential_class::CoulombLike>(cls);
    const bool is_sub = std::holds_alternative<potential_class::SubCoulomb>(cls);
    const bool mono = p.potential.registered_monotone() && s.nondecreasing;

    switch (need) {
      case Need::Bounded:
        add("bounded" + tag, is_bounded, std::string(class_name(cls)));
        break;
      case Need::CoulombLike:
        add("coulomb_like" + tag, is_coulomb, std::string(class_name(cls)));
        break;
      case Need::SubCoulomb:
        add("sub_coulomb" + tag, is_sub, std::string(class_name(cls)));
        break;
      case Need::AnyAdmitted:
        add("admitted_class" + tag, is_bounded || is_coulomb || is_sub,
            std::string(class_name(cls)));
        // Each class brings its own monotonicity requirement.
        if (is_coulomb)
          add("f_nonincreasing" + tag, s.f_nonincreasing);
        else
          add("monotone" + tag, mono);
        break;
    }
    if (monotone) add("monotone" + tag, mono);
    if (f_monotone) add("f_nonincreasing" + tag, s.f_nonincreasing);
    if (depth) {
      const auto* b = std::get_if<potential_class::Bounded>(&cls);
      const bool ok = b && -b->V0 <= 2.0 * m;
      add("depth" + tag, ok,
          b ? "-V0 = " + fmt_double(-b->V0) + ", 2m = " + fmt_double(2 * m) : "unbounded");
    }
    if (is_coulomb && !line && (need == Need::CoulombLike || need == Need::AnyAdmitted)) {
      const double f0 = std::get<potential_class::CoulombLike>(cls).f0;
      add("subcritical" + tag, f0 < kabs,
          "f0 = " + fmt_double(f0) + ", |kappa| = " + fmt_double(kabs));
    }
  }

  rep.applicable = std::all_of(rep.conditions.begin(), rep.conditions.end(),
                               [](const Condition& x) { return x.holds; });
  return rep;
}

}  // namespace dirac
