#include "dirac/io.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>

namespace dirac::io {

namespace {

[[noreturn]] void bad(const std::string& what) { throw std::invalid_argument(what); }

double get_number(const Json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) bad(where + ": missing '" + key + "'");
  if (!j[key].is_number()) bad(where + ": '" + key + "' must be a number");
  return j[key].get<double>();
}

std::vector<double> get_array(const Json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array()) bad(std::string("tabulated: '") + key + "' must be an array");
  std::vector<double> out;
  for (const auto& x : j[key]) {
    if (!x.is_number()) bad(std::string("tabulated: '") + key + "' must hold numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

constexpr std::size_t kMaxAreas = 16;

}  // namespace

std::string sig9(double x) { return fmt::format("{:.9g}", x); }

Json num(double x) {
  if (!std::isfinite(x)) return nullptr;
  // Round-trip through the 9-digit text so the shortest repr is that text.
  return std::stod(sig9(x));
}

PotentialSpec potential_from_json(const Json& j) {
  if (!j.is_object()) bad("potential must be an object");
  if (!j.contains("name") || !j["name"].is_string()) bad("potential: missing 'name'");
  const auto name = j["name"].get<std::string>();
  if (name == "tabulated") return family::Tabulated(get_array(j, "r"), get_array(j, "V"));
  std::map<std::string, double> params;
  for (const auto& [k, v] : j.items()) {
    if (k == "name") continue;
    if (!v.is_number()) bad("potential parameter '" + k + "' must be a number");
    params[k] = v.get<double>();
  }
  return make_potential(name, params);
}

Geometry geometry_from_json(const Json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "line") return OneDim{};
    bad("geometry must be \"line\" or {d, j, tau}");
  }
  if (!j.is_object()) bad("geometry must be \"line\" or {d, j, tau}");
  const double d = get_number(j, "d", "geometry");
  if (d == 1) return OneDim{};
  if (d != std::round(d)) bad("geometry: d must be an integer");
  const double jj = get_number(j, "j", "geometry");
  const double tau = get_number(j, "tau", "geometry");
  return AngularSector(static_cast<int>(d), HalfInteger::from_double(jj), static_cast<int>(tau));
}

Problem problem_from_json(const Json& j, const Json* defaults) {
  if (!j.is_object()) bad("problem must be an object");
  auto field = [&](const char* key) -> const Json& {
    if (j.contains(key)) return j[key];
    if (defaults && defaults->contains(key)) return (*defaults)[key];
    bad(std::string("problem: missing '") + key + "'");
  };
  const Json& m = field("mass");
  if (!m.is_number()) bad("problem: 'mass' must be a number");
  if (!j.contains("potential")) bad("problem: missing 'potential'");
  return Problem(m.get<double>(), geometry_from_json(field("geometry")),
                 potential_from_json(j["potential"]));
}

ComparisonCase case_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("a") || !j.contains("b")) bad("case needs 'a' and 'b'");
  Base base = Base::A;
  if (j.contains("base")) {
    const auto s = j["base"].get<std::string>();
    if (s == "b")
      base = Base::B;
    else if (s != "a")
      bad("base must be \"a\" or \"b\"");
  }
  return ComparisonCase(problem_from_json(j["a"], &j), problem_from_json(j["b"], &j), base);
}

Json to_json(const PotentialSpec& p) {
  Json j;
  j["name"] = std::string(p.name());
  if (const auto* t = std::get_if<family::Tabulated>(&p.family())) {
    Json r = Json::array(), v = Json::array();
    for (double x : t->r()) r.push_back(num(x));
    for (double x : t->V()) v.push_back(num(x));
    j["r"] = r;
    j["V"] = v;
  }
  for (const auto& [k, v] : p.parameters()) j[k] = num(v);
  return j;
}

Json to_json(const Geometry& g) {
  if (is_one_dim(g)) return "line";
  const auto& s = std::get<AngularSector>(g);
  Json j;
  j["d"] = s.dimension();
  j["j"] = num(s.j().value());
  j["tau"] = s.tau();
  j["kappa"] = num(s.kappa());
  return j;
}

Json to_json(const Problem& p) {
  Json j;
  j["mass"] = num(p.mass);
  j["geometry"] = to_json(p.geometry);
  j["potential"] = to_json(p.potential);
  return j;
}

Json to_json(const ComparisonCase& c) {
  Json j;
  j["a"] = to_json(c.a);
  j["b"] = to_json(c.b);
  j["base"] = c.base == Base::A ? "a" : "b";
  return j;
}

Json solution_json(const Problem& p, const WaveSolution& s) {
  Json j;
  j["energy"] = num(s.energy);
  j["nodes"] = {{"psi1", s.nodes1}, {"psi2", s.nodes2}};
  j["norm"] = num(s.norm);
  j["class"] = std::string(class_name(s.potential_class));
  j["sector"] = to_json(p.geometry);
  j["mass"] = num(s.mass);
  j["potential"] = to_json(p.potential);
  j["decay"] = num(s.decay);
  j["origin_exponents"] = {num(s.p1), num(s.p2)};
  j["r_max"] = num(s.r_max);
  j["points"] = s.grid.size();
  return j;
}

Json solution_json(const CoulombGround& g) {
  Json j;
  j["energy"] = num(g.energy());
  j["nodes"] = {{"psi1", 0}, {"psi2", 0}};
  j["norm"] = num(1.0);
  j["class"] = "coulomb_like";
  j["sector"] = {{"d", 3}, {"j", 0.5}, {"tau", -1}, {"kappa", -1}};
  j["mass"] = num(g.mass());
  j["potential"] = {{"name", "coulomb"}, {"v", num(g.alpha())}};
  j["decay"] = num(g.decay());
  j["origin_exponents"] = {num(g.gamma()), num(g.gamma())};
  return j;
}

Json verdict_json(const TheoremVerdict& v) {
  Json j;
  j["theorem"] = theorem_number(v.theorem);
  j["form"] = v.corollary ? "corollary" : "theorem";
  if (v.corollary) j["shortcut"] = v.shortcut;
  j["applicable"] = v.applicable();
  Json failed = Json::array();
  for (const auto& f : v.applicability.failed()) failed.push_back(f);
  j["failed_conditions"] = failed;
  j["condition_holds"] = v.condition_holds;
  double cmin = std::numeric_limits<double>::infinity();
  for (const auto& c : v.curves) cmin = std::min(cmin, c.min_value);
  j["curve_min"] = v.curves.empty() ? Json(nullptr) : num(cmin);
  j["predicted"] = v.predicted == Prediction::EaAtMostEb ? "Ea<=Eb" : "inconclusive";
  j["measured"] = {{"Ea", v.Ea ? num(*v.Ea) : Json(nullptr)},
                   {"Eb", v.Eb ? num(*v.Eb) : Json(nullptr)}};
  j["consistent"] = v.consistent;

  Json curves = Json::array();
  for (const auto& c : v.curves) {
    Json cj;
    cj["weight"] = std::string(weight_name(c.kind));
    cj["min"] = num(c.min_value);
    cj["min_location"] = num(c.min_location);
    cj["value_at_infinity"] = c.value_at_infinity ? num(*c.value_at_infinity) : Json(nullptr);
    cj["tail_diverges_negative"] = c.tail_diverges_negative;
    cj["tol_cond"] = num(c.tol_cond);
    cj["holds"] = c.holds;
    if (c.shortcut_value) cj["shortcut_value"] = num(*c.shortcut_value);
    if (!c.interval_areas.empty()) {
      Json a = Json::array();
      for (std::size_t i = 0; i < std::min(c.interval_areas.size(), kMaxAreas); ++i)
        a.push_back(num(c.interval_areas[i]));
      cj["interval_areas"] = a;
      cj["interval_count"] = c.interval_areas.size();
    }
    if (c.tail_area) cj["tail_area"] = num(*c.tail_area);
    curves.push_back(cj);
  }
  j["curves"] = curves;
  Json notes = Json::array();
  for (const auto& n : v.notes) notes.push_back(n);
  j["notes"] = notes;
  return j;
}

Json report_json(const ComparisonReport& r) {
  Json j;
  j["case"] = to_json(r.ctx.cs);
  Json cr = Json::array();
  for (double x : r.ctx.cross.points) cr.push_back(num(x));
  j["crossings"] = cr;
  j["first_sign"] = r.ctx.cross.first_sign;
  j["lobes_truncated"] = r.ctx.cross.lobes_truncated;
  Json vs = Json::array();
  for (const auto& v : r.verdicts) vs.push_back(verdict_json(v));
  j["verdicts"] = vs;
  j["identity_residual"] = r.identity_residual ? num(*r.identity_residual) : Json(nullptr);
  j["all_consistent"] = r.all_consistent;
  Json errors = Json::object();
  if (!r.ctx.error_a.empty()) errors["a"] = r.ctx.error_a;
  if (!r.ctx.error_b.empty()) errors["b"] = r.ctx.error_b;
  if (!errors.empty()) j["errors"] = errors;
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void write_wave_csv(std::ostream& os, const WaveSolution& s) {
  os << "r,psi1,psi2\n";
  for (std::size_t i = 0; i < s.grid.size(); ++i)
    os << sig9(s.grid[i]) << ',' << sig9(s.psi1[i]) << ',' << sig9(s.psi2[i]) << '\n';
}

void write_wave_csv(std::ostream& os, const CoulombGround& g, std::span<const double> grid) {
  os << "r,psi1,psi2\n";
  for (double r : grid) os << sig9(r) << ',' << sig9(g.psi1(r)) << ',' << sig9(g.psi2(r)) << '\n';
}

void write_curve_csv(std::ostream& os, const CumulativeCurve& c) {
  os << "r,value\n";
  for (std::size_t i = 0; i < c.grid.size(); ++i)
    os << sig9(c.grid[i]) << ',' << sig9(c.values[i]) << '\n';
}

}  // namespace dirac::io
