#include "cli.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <iostream>
#include <iterator>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "dirac/errors.hpp"

namespace dirac::cli {

namespace fs = std::filesystem;
using io::Json;

ComparisonOptions comparison_options(const Tolerances& t) {
  ComparisonOptions o;
  if (t.energy) o.shooting.energy_tol = *t.energy;
  if (t.integral) o.int_tol = *t.integral;
  return o;
}

Base default_base(const ComparisonCase& c) {
  if (exact_oracle(c.a)) return Base::A;
  if (exact_oracle(c.b)) return Base::B;
  return Base::A;
}

namespace {

Json parse(const char* text) { return Json::parse(text); }

const std::map<std::string, Json>& examples() {
  static const std::map<std::string, Json> m = {
      {"fig1", parse(R"({"mass": 1, "geometry": "line",
                        "potential": {"name": "exponential", "beta": 0.9, "b": 0.5}})")},
      {"fig3", parse(R"({"mass": 1, "geometry": {"d": 8, "j": 1.5, "tau": -1},
                        "potential": {"name": "woods_saxon", "v": 4, "R": 2, "a": 1.2}})")},
      {"sec3", parse(R"({"mass": 1, "geometry": "line",
                        "a": {"potential": {"name": "laser_dressed", "alpha": 0.61362, "a": 0.62}},
                        "b": {"potential": {"name": "exponential", "beta": 0.8, "b": 0.41}}})")},
      {"sec5a", parse(R"({"mass": 1, "geometry": {"d": 3, "j": 0.5, "tau": -1},
                         "a": {"potential": {"name": "osc_cubic", "alpha": 3.4, "a": 2.04,
                                             "u": 7, "v": 0.4, "kappa": 7, "s": 2.04}},
                         "b": {"potential": {"name": "rational_cubic", "beta": 3.4, "b": 2.04,
                                             "w": 7}}})")},
      {"sec5b", parse(R"({"mass": 2, "geometry": {"d": 3, "j": 0.5, "tau": -1},
                         "a": {"potential": {"name": "hulthen", "v": 0.2, "lambda": 0.3}},
                         "b": {"potential": {"name": "coulomb", "v": 0.508}},
                         "base": "b"})")},
      {"sec5d", parse(R"({"mass": 1, "geometry": {"d": 3, "j": 0.5, "tau": -1},
                         "a": {"potential": {"name": "coulomb", "v": 0.579}},
                         "b": {"potential": {"name": "sech2", "beta": 0.3, "b": 0.2}},
                         "base": "a"})")},
  };
  return m;
}

const TheoremVerdict& find_verdict(const ComparisonReport& r, Theorem t, bool corollary) {
  for (const auto& v : r.verdicts)
    if (v.theorem == t && v.corollary == corollary) return v;
  throw std::logic_error("verdict missing from report");
}

double flag(bool b) { return b ? 1.0 : 0.0; }

bool certified(const TheoremVerdict& v) {
  return v.applicable() && v.condition_holds && v.consistent &&
         v.predicted == Prediction::EaAtMostEb;
}

double need(const std::optional<double>& x, const char* what) {
  if (!x) throw SolverError(std::string(what) + " unavailable");
  return *x;
}

double point(const std::vector<double>& v, std::size_t i, const char* what) {
  if (i >= v.size()) throw SolverError(std::string(what) + " unavailable");
  return v[i];
}

std::string weight_slug(WeightKind k) {
  switch (k) {
    case WeightKind::Unit: return "unit";
    case WeightKind::Phi1Base: return "phi1";
    case WeightKind::TPhi2Base: return "t_phi2";
    case WeightKind::R2K: return "r2k";
    case WeightKind::Psi1RK: return "psi1_rk";
    case WeightKind::NegPsi2RK1: return "neg_psi2_rk1";
    case WeightKind::NegPsi2RK: return "neg_psi2_rk";
  }
  return "w";
}

void write_file(const fs::path& p, const std::string& text) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream os(p, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + p.string());
  os << text;
}

Json read_config(const std::string& path) {
  try {
    if (path.empty() || path == "-") return Json::parse(std::cin);
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("cannot open config " + path);
    return Json::parse(is);
  } catch (const Json::parse_error& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
  }
}

ComparisonCase with_base(const ComparisonCase& c, Base b) { return ComparisonCase(c.a, c.b, b); }

ComparisonCase case_with_default_base(const Json& j) {
  auto c = io::case_from_json(j);
  if (!j.contains("base")) c = with_base(c, default_base(c));
  return c;
}

bool is_no_bound(const std::string& err) { return err.rfind("no bound state", 0) == 0; }

}  // namespace

const std::vector<std::string>& example_ids() {
  static const std::vector<std::string> ids = {"fig1", "sec3", "fig3", "sec5a", "sec5b", "sec5d"};
  return ids;
}

Json example_descriptor(const std::string& id) {
  const auto it = examples().find(id);
  if (it == examples().end()) throw std::invalid_argument("unknown example '" + id + "'");
  return it->second;
}

bool ReproRow::ok() const { return std::abs(diff()) <= tolerance * (1 + 1e-9) + 1e-15; }

std::vector<ReproRow> reproduce(const std::string& id, const Tolerances& t) {
  const Json desc = example_descriptor(id);
  const auto opts = comparison_options(t);
  std::vector<ReproRow> rows;

  if (id == "fig1" || id == "fig3") {
    const auto s = solve_ground(io::problem_from_json(desc), opts.shooting);
    rows.push_back({"E", id == "fig1" ? 0.49233 : 0.62317, s.energy, 5e-5});
    return rows;
  }

  const auto c = case_with_default_base(desc);
  if (id == "sec3") {
    const auto r = end_to_end(c, opts, Theorem::T1);
    const auto& cor = find_verdict(r, Theorem::T1, true);
    const auto& x = r.ctx.cross.points;
    const auto& areas = cor.curves.at(0).interval_areas;
    rows.push_back({"x1", 0.94437, point(x, 0, "x1"), 1e-4});
    rows.push_back({"x2", 4.13782, point(x, 1, "x2"), 1e-4});
    rows.push_back({"A", 0.11456, point(areas, 0, "A"), 2e-5});
    rows.push_back({"B", 0.11455, point(areas, 1, "B"), 2e-5});
    rows.push_back({"Ea", 0.45657, need(r.ctx.Ea(), "Ea"), 5e-5});
    rows.push_back({"Eb", 0.52332, need(r.ctx.Eb(), "Eb"), 5e-5});
    rows.push_back({"theorem1_holds_consistent", 1.0,
                    flag(certified(find_verdict(r, Theorem::T1, false))), 0.0});
  } else if (id == "sec5a") {
    const auto r = end_to_end(c, opts, Theorem::T3);
    const auto& cor = find_verdict(r, Theorem::T3, true);
    const auto& o = std::get<family::OscCubic>(c.a.potential.family());
    const double scale = o.alpha * o.v / (3.0 * o.u);
    const auto& areas = cor.curves.at(0).interval_areas;
    rows.push_back({"lobe_area_1", 0.0965, point(areas, 0, "lobe 1") / scale, 2e-4});
    rows.push_back({"lobe_area_2", 0.0962, point(areas, 1, "lobe 2") / scale, 2e-4});
    rows.push_back({"Ea", 0.99427, need(r.ctx.Ea(), "Ea"), 5e-5});
    rows.push_back({"Eb", 0.99542, need(r.ctx.Eb(), "Eb"), 5e-5});
    rows.push_back({"corollary3_holds_consistent", 1.0, flag(certified(cor)), 0.0});
  } else if (id == "sec5b") {
    const auto r = end_to_end(c, opts, Theorem::T5);
    const auto& cor = find_verdict(r, Theorem::T5, true);
    const double gamma = std::sqrt(1.0 - 0.508 * 0.508);
    rows.push_back({"rho1_inf", 0.00113, need(cor.curves.at(0).value_at_infinity, "rho1"), 5e-5});
    rows.push_back({"rho2_inf", 0.00031, need(cor.curves.at(1).value_at_infinity, "rho2"), 5e-5});
    rows.push_back({"Ea", 1.58604, need(r.ctx.Ea(), "Ea"), 5e-5});
    rows.push_back({"Eb", 1.72271, need(r.ctx.Eb(), "Eb"), 5e-6});
    rows.push_back({"Eb_vs_2gamma", 2.0 * gamma, need(r.ctx.Eb(), "Eb"), 5e-6});
    rows.push_back({"corollary5_holds_consistent", 1.0, flag(certified(cor)), 0.0});
  } else if (id == "sec5d") {
    const auto r = end_to_end(c, opts, Theorem::T7);
    const auto& cor = find_verdict(r, Theorem::T7, true);
    const auto& x = r.ctx.cross.points;
    rows.push_back({"r1", 2.41742, point(x, 0, "r1"), 1e-4});
    rows.push_back({"r2", 5.66301, point(x, 1, "r2"), 1e-4});
    rows.push_back({"zeta1_r2", 0.18778, need(cor.curves.at(0).shortcut_value, "zeta1"), 2e-4});
    rows.push_back({"zeta2_r2", 0.00084, need(cor.curves.at(1).shortcut_value, "zeta2"), 5e-5});
    rows.push_back({"Ea", 0.81533, need(r.ctx.Ea(), "Ea"), 5e-6});
    rows.push_back({"Eb", 0.88318, need(r.ctx.Eb(), "Eb"), 5e-5});
    rows.push_back({"corollary7_holds_consistent", 1.0, flag(certified(cor)), 0.0});
  }
  return rows;
}

std::string summary_markdown(const std::string& id, const std::vector<ReproRow>& rows) {
  std::string s = fmt::format("## {}\n\n| quantity | reference | computed | abs diff | tolerance | ok |\n"
                              "|---|---|---|---|---|---|\n",
                              id);
  for (const auto& r : rows)
    s += fmt::format("| {} | {} | {} | {} | {} | {} |\n", r.quantity, io::sig9(r.reference),
                     io::sig9(r.computed), io::sig9(std::abs(r.diff())), io::sig9(r.tolerance),
                     r.ok() ? "yes" : "NO");
  return s;
}

std::string summary_csv(const std::string& id, const std::vector<ReproRow>& rows) {
  std::string s = "example,quantity,reference,computed,abs_diff,tolerance,ok\n";
  for (const auto& r : rows)
    s += fmt::format("{},{},{},{},{},{},{}\n", id, r.quantity, io::sig9(r.reference),
                     io::sig9(r.computed), io::sig9(std::abs(r.diff())), io::sig9(r.tolerance),
                     r.ok() ? 1 : 0);
  return s;
}

// ---------------------------------------------------------------------------
// sweep

SweepConfig sweep_from_json(const Json& j) {
  SweepConfig cfg;
  if (j.contains("problem"))
    cfg.base = Json{{"problem", j["problem"]}};
  else if (j.contains("case"))
    cfg.base = Json{{"case", j["case"]}};
  else
    throw std::invalid_argument("sweep needs a 'problem' or 'case' template");
  if (!j.contains("sweep") || !j["sweep"].is_array() || j["sweep"].empty() || j["sweep"].size() > 2)
    throw std::invalid_argument("sweep needs one or two axes");
  for (const auto& a : j["sweep"]) {
    SweepAxis ax;
    ax.path = a.at("path").get<std::string>();
    if (a.contains("values")) {
      for (const auto& v : a["values"]) ax.values.push_back(v.get<double>());
    } else {
      const double from = a.at("from").get<double>(), to = a.at("to").get<double>();
      const int steps = a.at("steps").get<int>();
      if (steps < 0) throw std::invalid_argument("sweep steps must be >= 0");
      for (int i = 0; i < steps; ++i)
        ax.values.push_back(steps == 1 ? from : from + (to - from) * i / (steps - 1));
    }
    cfg.axes.push_back(std::move(ax));
  }
  if (j.contains("threads")) cfg.threads = j["threads"].get<int>();
  if (j.contains("theorem")) cfg.theorem = theorem_from_number(j["theorem"].get<int>());
  return cfg;
}

namespace {

Json::json_pointer pointer(const std::string& dotted) {
  std::string p;
  std::stringstream ss(dotted);
  for (std::string part; std::getline(ss, part, '.');) p += "/" + part;
  return Json::json_pointer(p);
}

std::string verdict_tag(const TheoremVerdict& v) {
  const std::string state = !v.applicable() ? "na" : v.condition_holds ? "holds" : "fails";
  return fmt::format("T{}{}={}{}", theorem_number(v.theorem), v.corollary ? "c" : "", state,
                     v.consistent ? "" : "!");
}

}  // namespace

std::string run_sweep(const SweepConfig& cfg, const Tolerances& t) {
  const bool is_case = cfg.base.contains("case");
  const Json tmpl = is_case ? cfg.base["case"] : cfg.base["problem"];
  const auto opts = comparison_options(t);

  std::vector<std::vector<double>> points;
  if (cfg.axes.size() == 1) {
    for (double x : cfg.axes[0].values) points.push_back({x});
  } else {
    for (double x : cfg.axes[0].values)
      for (double y : cfg.axes[1].values) points.push_back({x, y});
  }

  std::string header;
  for (const auto& a : cfg.axes) header += a.path + ",";
  header += is_case ? "Ea,Eb,verdicts,consistent,status\n" : "E,nodes1,nodes2,norm,status\n";

  std::vector<std::string> rows(points.size());
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      std::string row;
      for (double v : points[i]) row += io::sig9(v) + ",";
      try {
        Json d = tmpl;
        for (std::size_t k = 0; k < cfg.axes.size(); ++k) d[pointer(cfg.axes[k].path)] = points[i][k];
        if (is_case) {
          const auto r = end_to_end(case_with_default_base(d), opts, cfg.theorem);
          auto e = [](const std::optional<double>& x) { return x ? io::sig9(*x) : std::string(); };
          std::string tags;
          for (const auto& v : r.verdicts) tags += (tags.empty() ? "" : ";") + verdict_tag(v);
          std::string status = "ok";
          if (!r.ctx.error_a.empty()) status = "a: " + r.ctx.error_a;
          if (!r.ctx.error_b.empty()) status = "b: " + r.ctx.error_b;
          row += fmt::format("{},{},{},{},\"{}\"", e(r.ctx.Ea()), e(r.ctx.Eb()), tags,
                             r.all_consistent ? 1 : 0, status);
        } else {
          const auto s = solve_ground(io::problem_from_json(d), opts.shooting);
          row += fmt::format("{},{},{},{},ok", io::sig9(s.energy), s.nodes1, s.nodes2,
                             io::sig9(s.norm));
        }
      } catch (const std::exception& e) {
        {
          std::lock_guard lock(log_mutex);
          std::cerr << "sweep point " << i << ": " << e.what() << "\n";
        }
        row += is_case ? fmt::format(",,,0,\"error: {}\"", e.what())
                       : fmt::format(",,,,\"error: {}\"", e.what());
      }
      rows[i] = row + "\n";
    }
  };

  int n = cfg.threads > 0 ? cfg.threads : static_cast<int>(std::thread::hardware_concurrency());
  n = std::clamp(n, 1, std::max<int>(1, static_cast<int>(points.size())));
  std::vector<std::thread> pool;
  for (int k = 0; k < n; ++k) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  std::string out = header;
  for (const auto& r : rows) out += r;
  return out;
}

// ---------------------------------------------------------------------------
// commands

namespace {

struct Flags {
  std::string config;
  std::string out = ".";
  Tolerances tol;
  std::string theorem;
  std::string base;
};

int cmd_solve(const Flags& f) {
  const Json cfg = read_config(f.config);
  const Json& desc = cfg.contains("problem") ? cfg["problem"] : cfg;
  const Problem p = io::problem_from_json(desc);
  const fs::path out(f.out);
  try {
    const auto s = solve_ground(p, comparison_options(f.tol).shooting);
    write_file(out / "solution.json", io::dump(io::solution_json(p, s)));
    std::ostringstream csv;
    io::write_wave_csv(csv, s);
    write_file(out / "wave.csv", csv.str());
    std::cout << io::dump(io::solution_json(p, s));
    return kOk;
  } catch (const NoBoundState& e) {
    const Json body = {{"error", e.what()}, {"kind", "no_bound_state"}};
    write_file(out / "solution.json", io::dump(body));
    std::cout << io::dump(body);
    return kNoBoundState;
  }
}

std::vector<double> potential_grid(const ComparisonReport& r) {
  for (const auto& v : r.verdicts)
    if (!v.curves.empty()) return v.curves.front().curve.grid;
  const double L = r.ctx.length;
  std::vector<double> g{0.0};
  for (int i = 1; i <= 1200; ++i) g.push_back(30.0 * L * i / 1200);
  return g;
}

void write_potentials(const fs::path& path, const ComparisonReport& r) {
  const auto& c = r.ctx.cs;
  const bool radial = !is_one_dim(c.a.geometry);
  const double kabs = std::abs(geometry_kappa(c.a.geometry));
  std::vector<WeightKind> kinds;
  for (const auto& v : r.verdicts)
    for (const auto& cr : v.curves)
      if (std::find(kinds.begin(), kinds.end(), cr.kind) == kinds.end()) kinds.push_back(cr.kind);
  const BaseWave* base = r.ctx.base ? &*r.ctx.base : nullptr;
  std::vector<Integrand> fs;
  for (auto k : kinds) fs.push_back(weighted_integrand(c, k, base));

  std::string s = "r,Va,Vb,dV";
  if (radial) s += ",Va_r2k,Vb_r2k";
  for (auto k : kinds) s += ",dV_" + weight_slug(k);
  s += "\n";
  for (double t : potential_grid(r)) {
    if (t <= 0) continue;
    const double va = c.a.potential(t), vb = c.b.potential(t);
    s += fmt::format("{},{},{},{}", io::sig9(t), io::sig9(va), io::sig9(vb), io::sig9(vb - va));
    if (radial) {
      const double w = std::pow(t, 2 * kabs);
      s += fmt::format(",{},{}", io::sig9(va * w), io::sig9(vb * w));
    }
    for (const auto& f : fs) s += "," + io::sig9(f(t));
    s += "\n";
  }
  write_file(path, s);
}

int cmd_compare(const Flags& f) {
  const Json cfg = read_config(f.config);
  const Json& desc = cfg.contains("case") ? cfg["case"] : cfg;
  auto c = case_with_default_base(desc);
  if (f.base == "a" || f.base == "b") c = with_base(c, f.base == "a" ? Base::A : Base::B);

  std::optional<Theorem> only;
  std::string th = f.theorem;
  if (th.empty() && cfg.contains("theorem")) {
    th = cfg["theorem"].is_number() ? std::to_string(cfg["theorem"].get<int>())
                                    : cfg["theorem"].get<std::string>();
  }
  if (!th.empty() && th != "all") only = theorem_from_number(std::stoi(th));

  const auto rep = end_to_end(c, comparison_options(f.tol), only);
  const fs::path out(f.out);
  write_file(out / "report.json", io::dump(io::report_json(rep)));
  for (const auto& v : rep.verdicts) {
    if (v.corollary) continue;
    for (const auto& cr : v.curves) {
      std::ostringstream os;
      io::write_curve_csv(os, cr.curve);
      write_file(out / "curves" /
                     fmt::format("T{}_{}.csv", theorem_number(v.theorem), weight_slug(cr.kind)),
                 os.str());
    }
  }
  write_potentials(out / "potentials.csv", rep);

  for (const auto& v : rep.verdicts)
    std::cout << fmt::format("{:<4} {:<10} applicable={} condition={} predicted={} consistent={}\n",
                             fmt::format("T{}{}", theorem_number(v.theorem), v.corollary ? "c" : ""),
                             v.corollary ? v.shortcut : "", v.applicable(), v.condition_holds,
                             v.predicted == Prediction::EaAtMostEb ? "Ea<=Eb" : "inconclusive",
                             v.consistent);
  for (const auto* err : {&rep.ctx.error_a, &rep.ctx.error_b}) {
    if (err->empty()) continue;
    std::cerr << "error: " << *err << "\n";
    return is_no_bound(*err) ? kNoBoundState : kSolverFailure;
  }
  return kOk;
}

int cmd_reproduce(const Flags& f, const std::string& id) {
  std::vector<std::string> ids;
  if (id == "all") {
    ids = example_ids();
  } else {
    example_descriptor(id);
    ids = {id};
  }
  std::string md, csv = "example,quantity,reference,computed,abs_diff,tolerance,ok\n";
  bool all_ok = true;
  for (const auto& e : ids) {
    const auto rows = reproduce(e, f.tol);
    md += summary_markdown(e, rows) + "\n";
    const auto part = summary_csv(e, rows);
    csv += part.substr(part.find('\n') + 1);
    for (const auto& r : rows) all_ok = all_ok && r.ok();
  }
  const fs::path out(f.out);
  const std::string stem = id == "all" ? "reproduce" : "reproduce_" + id;
  write_file(out / (stem + ".md"), md);
  write_file(out / (stem + ".csv"), csv);
  std::cout << md;
  return all_ok ? kOk : kReproduceMiss;
}

int cmd_sweep(const Flags& f) {
  auto cfg = sweep_from_json(read_config(f.config));
  if (!f.theorem.empty() && f.theorem != "all") cfg.theorem = theorem_from_number(std::stoi(f.theorem));
  const auto csv = run_sweep(cfg, f.tol);
  write_file(fs::path(f.out) / "sweep.csv", csv);
  std::cout << csv;
  return kOk;
}

int cmd_catalog(const Flags& f) {
  Json j = Json::array();
  for (auto name : catalog_names()) {
    Json params = Json::array();
    for (auto p : parameter_names(name)) params.push_back(std::string(p));
    if (name == "tabulated") params = {"r[]", "V[]"};
    j.push_back({{"name", std::string(name)}, {"parameters", params}});
  }
  if (f.out != ".") write_file(fs::path(f.out) / "catalog.json", io::dump(j));
  std::cout << io::dump(j);
  return kOk;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Dirac bound states and refined comparison theorems"};
  app.require_subcommand(1);
  app.fallthrough();

  Flags f;
  std::string id;
  app.add_option("--config", f.config, "JSON descriptor (default: stdin)");
  app.add_option("--out", f.out, "output directory")->capture_default_str();
  app.add_option("--tol-energy", f.tol.energy, "eigenvalue tolerance");
  app.add_option("--tol-int", f.tol.integral, "quadrature tolerance");
  app.add_option("--theorem", f.theorem, "theorem number 1-7 or 'all' (default: all)");
  app.add_option("--base", f.base, "base problem for wave-function weights")
      ->check(CLI::IsMember({"a", "b"}));

  auto* solve = app.add_subcommand("solve", "nodeless bound state of one problem");
  auto* compare = app.add_subcommand("compare", "comparison verdicts for a pair of problems");
  auto* repro = app.add_subcommand("reproduce", "reproduce a built-in example");
  repro->add_option("id", id, "fig1, sec3, fig3, sec5a, sec5b, sec5d or all")->required();
  auto* sweep = app.add_subcommand("sweep", "parameter sweep over a problem or case");
  auto* catalog = app.add_subcommand("catalog", "list potential families");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*solve) return cmd_solve(f);
    if (*compare) return cmd_compare(f);
    if (*repro) return cmd_reproduce(f, id);
    if (*sweep) return cmd_sweep(f);
    if (*catalog) return cmd_catalog(f);
  } catch (const NoBoundState& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNoBoundState;
  } catch (const SolverError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSolverFailure;
  } catch (const IntegrationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSolverFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace dirac::cli
