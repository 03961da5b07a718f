#pragma once

// JSON descriptors and reports, CSV tables. Floats are rounded to 9
// significant digits so identical inputs give byte-identical files.

#include <iosfwd>
#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "dirac/comparison.hpp"
#include "dirac/core_model.hpp"
#include "dirac/exact_solutions.hpp"
#include "dirac/radial_solver.hpp"

namespace dirac::io {

using Json = nlohmann::ordered_json;

// x rounded to 9 significant digits; null when not finite.
Json num(double x);
std::string sig9(double x);

// Descriptors:
//   problem: {"mass": 1, "geometry": "line" | {"d": 3, "j": 0.5, "tau": -1},
//             "potential": {"name": "exponential", "beta": 0.9, "b": 0.5}}
//   case:    {"a": problem, "b": problem, "base": "a" | "b"}; "mass" and
//            "geometry" at case level apply to both problems.
// Malformed documents throw std::invalid_argument.
PotentialSpec potential_from_json(const Json& j);
Geometry geometry_from_json(const Json& j);
Problem problem_from_json(const Json& j, const Json* defaults = nullptr);
ComparisonCase case_from_json(const Json& j);

Json to_json(const PotentialSpec& p);
Json to_json(const Geometry& g);
Json to_json(const Problem& p);
Json to_json(const ComparisonCase& c);

Json solution_json(const Problem& p, const WaveSolution& s);
Json solution_json(const CoulombGround& g);
Json report_json(const ComparisonReport& r);
Json verdict_json(const TheoremVerdict& v);

// Two-space indented dump with a trailing newline.
std::string dump(const Json& j);

void write_wave_csv(std::ostream& os, const WaveSolution& s);
void write_wave_csv(std::ostream& os, const CoulombGround& g, std::span<const double> grid);
void write_curve_csv(std::ostream& os, const CumulativeCurve& c);

}  // namespace dirac::io
