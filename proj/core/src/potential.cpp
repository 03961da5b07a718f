#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "dirac/core_model.hpp"
#include "dirac/errors.hpp"

namespace dirac {

namespace family {

Tabulated::Tabulated(std::vector<double> r, std::vector<double> V) {
  if (r.size() != V.size()) throw std::invalid_argument("tabulated: r and V differ in length");
  if (r.size() < 2) throw std::invalid_argument("tabulated: need at least two samples");
  if (r.front() < 0.0) throw std::invalid_argument("tabulated: negative radius");
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!std::isfinite(r[i]) || !std::isfinite(V[i]))
      throw std::invalid_argument("tabulated: non-finite sample");
    if (i > 0 && !(r[i] > r[i - 1]))
      throw std::invalid_argument("tabulated: radii must be strictly increasing");
  }

  // Fritsch-Carlson slopes.
  const std::size_t n = r.size();
  std::vector<double> delta(n - 1), m(n);
  for (std::size_t i = 0; i + 1 < n; ++i) delta[i] = (V[i + 1] - V[i]) / (r[i + 1] - r[i]);
  m[0] = delta[0];
  m[n - 1] = delta[n - 2];
  for (std::size_t i = 1; i + 1 < n; ++i)
    m[i] = (delta[i - 1] * delta[i] <= 0.0) ? 0.0 : 0.5 * (delta[i - 1] + delta[i]);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (delta[i] == 0.0) {
      m[i] = m[i + 1] = 0.0;
      continue;
    }
    const double a = m[i] / delta[i];
    const double b = m[i + 1] / delta[i];
    const double s = a * a + b * b;
    if (s > 9.0) {
      const double t = 3.0 / std::sqrt(s);
      m[i] = t * a * delta[i];
      m[i + 1] = t * b * delta[i];
    }
  }
  data_ = std::make_shared<const Data>(Data{std::move(r), std::move(V), std::move(m)});
}

double Tabulated::operator()(double x) const {
  const auto& d = *data_;
  if (x <= d.r.front()) return d.V.front();
  if (x >= d.r.back()) return d.V.back();
  const auto it = std::upper_bound(d.r.begin(), d.r.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - d.r.begin()) - 1;
  const double h = d.r[i + 1] - d.r[i];
  const double t = (x - d.r[i]) / h;
  const double t2 = t * t, t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
  return h00 * d.V[i] + h10 * h * d.slope[i] + h01 * d.V[i + 1] + h11 * h * d.slope[i + 1];
}

}  // namespace family

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require(bool ok, const char* family, const char* what) {
  if (!ok) throw std::invalid_argument(std::string(family) + ": " + what);
}

bool finite_all(std::initializer_list<double> xs) {
  return std::all_of(xs.begin(), xs.end(), [](double x) { return std::isfinite(x); });
}

void validate_family(const PotentialSpec::Family& f) {
  std::visit(
      overloaded{
          [](const family::Exponential& p) {
            require(finite_all({p.beta, p.b}), "exponential", "non-finite parameter");
            require(p.beta >= 0 && p.b > 0, "exponential", "need beta >= 0, b > 0");
          },
          [](const family::LaserDressed& p) {
            require(finite_all({p.alpha, p.a}), "laser_dressed", "non-finite parameter");
            require(p.alpha >= 0 && p.a > 0, "laser_dressed", "need alpha >= 0, a > 0");
          },
          [](const family::WoodsSaxon& p) {
            require(finite_all({p.v, p.R, p.a}), "woods_saxon", "non-finite parameter");
            require(p.v >= 0 && p.R >= 0 && p.a > 0, "woods_saxon", "need v >= 0, R >= 0, a > 0");
          },
          [](const family::Coulomb& p) {
            require(std::isfinite(p.v) && p.v >= 0, "coulomb", "need v >= 0");
          },
          [](const family::Yukawa& p) {
            require(finite_all({p.v, p.lambda}), "yukawa", "non-finite parameter");
            require(p.v >= 0 && p.lambda > 0, "yukawa", "need v >= 0, lambda > 0");
          },
          [](const family::Hulthen& p) {
            require(finite_all({p.v, p.lambda}), "hulthen", "non-finite parameter");
            require(p.v >= 0 && p.lambda > 0, "hulthen", "need v >= 0, lambda > 0");
          },
          [](const family::SechSquared& p) {
            require(finite_all({p.beta, p.b}), "sech2", "non-finite parameter");
            require(p.beta >= 0 && p.b > 0, "sech2", "need beta >= 0, b > 0");
          },
          [](const family::PowerSingular& p) {
            require(finite_all({p.v, p.q}), "power_singular", "non-finite parameter");
            require(p.v >= 0, "power_singular", "need v >= 0");
            require(p.q > 0 && p.q < 1, "power_singular", "need 0 < q < 1");
          },
          [](const family::OscCubic& p) {
            require(finite_all({p.alpha, p.a, p.u, p.v, p.kappa, p.s}), "osc_cubic",
                    "non-finite parameter");
            require(p.alpha >= 0 && p.v >= 0, "osc_cubic", "need alpha >= 0, v >= 0");
            require(p.a > 0 && p.u > 0 && p.kappa > 0 && p.s > 0, "osc_cubic",
                    "need a, u, kappa, s > 0");
          },
          [](const family::RationalCubic& p) {
            require(finite_all({p.beta, p.b, p.w}), "rational_cubic", "non-finite parameter");
            require(p.beta >= 0 && p.b > 0 && p.w > 0, "rational_cubic",
                    "need beta >= 0, b > 0, w > 0");
          },
          [](const family::Tabulated&) {},
      },
      f);
}

constexpr std::array<std::string_view, 11> kNames = {
    "exponential", "laser_dressed", "woods_saxon",    "coulomb",        "yukawa",   "hulthen",
    "sech2",       "power_singular", "osc_cubic",     "rational_cubic", "tabulated"};

const std::array<std::string_view, 2> kExpParams = {"beta", "b"};
const std::array<std::string_view, 2> kLaserParams = {"alpha", "a"};
const std::array<std::string_view, 3> kWsParams = {"v", "R", "a"};
const std::array<std::string_view, 1> kCoulombParams = {"v"};
const std::array<std::string_view, 2> kScreenedParams = {"v", "lambda"};
const std::array<std::string_view, 2> kPowerParams = {"v", "q"};
const std::array<std::string_view, 6> kOscParams = {"alpha", "a", "u", "v", "kappa", "s"};
const std::array<std::string_view, 3> kRationalParams = {"beta", "b", "w"};

}  // namespace

void PotentialSpec::validate() const { validate_family(family_); }

std::string_view PotentialSpec::name() const noexcept { return kNames[family_.index()]; }

std::vector<std::pair<std::string, double>> PotentialSpec::parameters() const {
  using P = std::vector<std::pair<std::string, double>>;
  return std::visit(
      overloaded{
          [](const family::Exponential& p) { return P{{"beta", p.beta}, {"b", p.b}}; },
          [](const family::LaserDressed& p) { return P{{"alpha", p.alpha}, {"a", p.a}}; },
          [](const family::WoodsSaxon& p) { return P{{"v", p.v}, {"R", p.R}, {"a", p.a}}; },
          [](const family::Coulomb& p) { return P{{"v", p.v}}; },
          [](const family::Yukawa& p) { return P{{"v", p.v}, {"lambda", p.lambda}}; },
          [](const family::Hulthen& p) { return P{{"v", p.v}, {"lambda", p.lambda}}; },
          [](const family::SechSquared& p) { return P{{"beta", p.beta}, {"b", p.b}}; },
          [](const family::PowerSingular& p) { return P{{"v", p.v}, {"q", p.q}}; },
          [](const family::OscCubic& p) {
            return P{{"alpha", p.alpha}, {"a", p.a},         {"u", p.u},
                     {"v", p.v},         {"kappa", p.kappa}, {"s", p.s}};
          },
          [](const family::RationalCubic& p) {
            return P{{"beta", p.beta}, {"b", p.b}, {"w", p.w}};
          },
          [](const family::Tabulated&) { return P{}; },
      },
      family_);
}

bool PotentialSpec::singular_at_origin() const noexcept {
  return std::visit(overloaded{
                        [](const family::Coulomb& p) { return p.v > 0; },
                        [](const family::Yukawa& p) { return p.v > 0; },
                        [](const family::Hulthen& p) { return p.v > 0; },
                        [](const family::PowerSingular& p) { return p.v > 0; },
                        [](const auto&) { return false; },
                    },
                    family_);
}

bool PotentialSpec::registered_monotone() const noexcept {
  return !std::holds_alternative<family::OscCubic>(family_);
}

double PotentialSpec::characteristic_length() const noexcept {
  auto inv_or_one = [](double x) { return x > 0 ? 1.0 / x : 1.0; };
  return std::visit(
      overloaded{
          [](const family::Exponential& p) { return 1.0 / p.b; },
          [](const family::LaserDressed& p) { return p.a; },
          [](const family::WoodsSaxon& p) { return std::max(p.R, p.a); },
          [&](const family::Coulomb& p) { return inv_or_one(p.v); },
          [](const family::Yukawa& p) { return 1.0 / p.lambda; },
          [](const family::Hulthen& p) { return 1.0 / p.lambda; },
          [](const family::SechSquared& p) { return 1.0 / p.b; },
          [](const family::PowerSingular& p) { return p.v > 0 ? std::pow(p.v, 1.0 / p.q) : 1.0; },
          [](const family::OscCubic& p) { return std::cbrt(p.a / p.u); },
          [](const family::RationalCubic& p) { return std::cbrt(p.b / p.w); },
          [](const family::Tabulated& p) {
            const auto& r = p.r();
            const auto& V = p.V();
            std::size_t imax = 0;
            for (std::size_t i = 1; i < V.size(); ++i)
              if (std::abs(V[i]) > std::abs(V[imax])) imax = i;
            const double half = 0.5 * std::abs(V[imax]);
            if (half == 0.0) return r.back() - r.front();
            for (std::size_t i = imax; i < V.size(); ++i)
              if (std::abs(V[i]) <= half) return std::max(r[i], 1e-3 * r.back());
            return r.back();
          },
      },
      family_);
}

double PotentialSpec::operator()(double r) const {
  return std::visit(
      overloaded{
          [r](const family::Exponential& p) { return -p.beta * std::exp(-p.b * r); },
          [r](const family::LaserDressed& p) { return -p.alpha / std::hypot(r, p.a); },
          [r](const family::WoodsSaxon& p) { return -p.v / (1.0 + std::exp((r - p.R) / p.a)); },
          [r](const family::Coulomb& p) { return p.v == 0 ? 0.0 : -p.v / r; },
          [r](const family::Yukawa& p) { return p.v == 0 ? 0.0 : -p.v * std::exp(-p.lambda * r) / r; },
          [r](const family::Hulthen& p) { return p.v == 0 ? 0.0 : -p.v / std::expm1(p.lambda * r); },
          [r](const family::SechSquared& p) {
            const double e = std::exp(-2.0 * p.b * r);
            return -4.0 * p.beta * e / ((1.0 + e) * (1.0 + e));
          },
          [r](const family::PowerSingular& p) { return p.v == 0 ? 0.0 : -p.v / std::pow(r, p.q); },
          [r](const family::OscCubic& p) {
            const double r3 = r * r * r;
            const double z = p.kappa * r3 + p.s;
            return -p.alpha / (p.u * r3 + p.a) * (1.0 + p.v * std::sin(z) / z);
          },
          [r](const family::RationalCubic& p) { return -p.beta / (p.w * r * r * r + p.b); },
          [r](const family::Tabulated& p) { return p(r); },
      },
      family_);
}

double evaluate(const PotentialSpec& p, double r) {
  if (!(r >= 0.0)) throw DomainError("potential evaluated at negative radius");
  if (r == 0.0 && p.singular_at_origin())
    throw DomainError(std::string(p.name()) + " is singular at the origin");
  return p(r);
}

std::span<const std::string_view> catalog_names() { return kNames; }

std::span<const std::string_view> parameter_names(std::string_view n) {
  if (n == "exponential" || n == "sech2") return kExpParams;
  if (n == "laser_dressed") return kLaserParams;
  if (n == "woods_saxon") return kWsParams;
  if (n == "coulomb") return kCoulombParams;
  if (n == "yukawa" || n == "hulthen") return kScreenedParams;
  if (n == "power_singular") return kPowerParams;
  if (n == "osc_cubic") return kOscParams;
  if (n == "rational_cubic") return kRationalParams;
  if (n == "tabulated") return {};
  throw std::invalid_argument("unknown potential family '" + std::string(n) + "'");
}

PotentialSpec make_potential(std::string_view name, const std::map<std::string, double>& params) {
  if (name == "tabulated") throw std::invalid_argument("tabulated potentials need sample arrays");
  const auto names = parameter_names(name);
  for (const auto& [k, v] : params) {
    (void)v;
    if (std::find(names.begin(), names.end(), k) == names.end())
      throw std::invalid_argument(std::string(name) + ": unknown parameter '" + k + "'");
  }
  auto get = [&](std::string_view k) {
    const auto it = params.find(std::string(k));
    if (it == params.end())
      throw std::invalid_argument(std::string(name) + ": missing parameter '" + std::string(k) +
                                  "'");
    return it->second;
  };
  if (name == "exponential") return PotentialSpec(family::Exponential{get("beta"), get("b")});
  if (name == "laser_dressed") return PotentialSpec(family::LaserDressed{get("alpha"), get("a")});
  if (name == "woods_saxon") return PotentialSpec(family::WoodsSaxon{get("v"), get("R"), get("a")});
  if (name == "coulomb") return PotentialSpec(family::Coulomb{get("v")});
  if (name == "yukawa") return PotentialSpec(family::Yukawa{get("v"), get("lambda")});
  if (name == "hulthen") return PotentialSpec(family::Hulthen{get("v"), get("lambda")});
  if (name == "sech2") return PotentialSpec(family::SechSquared{get("beta"), get("b")});
  if (name == "power_singular") return PotentialSpec(family::PowerSingular{get("v"), get("q")});
  if (name == "osc_cubic")
    return PotentialSpec(family::OscCubic{get("alpha"), get("a"), get("u"), get("v"), get("kappa"), get("s")});
  return PotentialSpec(family::RationalCubic{get("beta"), get("b"), get("w")});
}

std::string_view class_name(const PotentialClass& c) {
  return std::visit(overloaded{
                        [](const potential_class::Bounded&) { return std::string_view("bounded"); },
                        [](const potential_class::CoulombLike&) {
                          return std::string_view("coulomb_like");
                        },
                        [](const potential_class::SubCoulomb&) {
                          return std::string_view("sub_coulomb");
                        },
                        [](const potential_class::Unsupported&) {
                          return std::string_view("unsupported");
                        },
                    },
                    c);
}

PotentialClass classify(const PotentialSpec& p, const ClassifyOptions& opts) {
  using namespace potential_class;
  return std::visit(
      overloaded{
          [](const family::Exponential& f) -> PotentialClass { return Bounded{-f.beta}; },
          [](const family::LaserDressed& f) -> PotentialClass { return Bounded{-f.alpha / f.a}; },
          [](const family::WoodsSaxon& f) -> PotentialClass {
            return Bounded{-f.v / (1.0 + std::exp(-f.R / f.a))};
          },
          [](const family::Coulomb& f) -> PotentialClass {
            if (f.v == 0) return Bounded{0.0};
            return CoulombLike{f.v};
          },
          [](const family::Yukawa& f) -> PotentialClass {
            if (f.v == 0) return Bounded{0.0};
            return CoulombLike{f.v};
          },
          [](const family::Hulthen& f) -> PotentialClass {
            if (f.v == 0) return Bounded{0.0};
            return CoulombLike{f.v / f.lambda};
          },
          [](const family::SechSquared& f) -> PotentialClass { return Bounded{-f.beta}; },
          [](const family::PowerSingular& f) -> PotentialClass {
            if (f.v == 0) return Bounded{0.0};
            return SubCoulomb{f.v, f.q};
          },
          [](const family::OscCubic& f) -> PotentialClass {
            return Bounded{-f.alpha / f.a * (1.0 + f.v * std::sin(f.s) / f.s)};
          },
          [](const family::RationalCubic& f) -> PotentialClass { return Bounded{-f.beta / f.b}; },
          [&](const family::Tabulated& f) -> PotentialClass {
            const auto& V = f.V();
            double scale = 0.0;
            for (double v : V) scale = std::max(scale, std::abs(v));
            const double tail = opts.horizon > 0 ? f(opts.horizon) : V.back();
            if (std::abs(tail) > opts.vanishing_tolerance * std::max(scale, 1.0))
              return Unsupported{"tabulated potential does not vanish at the end of the table"};
            return Bounded{V.front()};
          },
      },
      p.family());
}

}  // namespace dirac
