#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "dirac/io.hpp"

using namespace dirac;
using io::Json;

TEST(Numbers, NineSignificantDigits) {
  EXPECT_EQ(io::sig9(0.49233123456789), "0.492331235");
  EXPECT_EQ(io::sig9(1e-12), "1e-12");
  EXPECT_EQ(io::num(1.0 / 3).dump(), "0.333333333");
  EXPECT_TRUE(io::num(NAN).is_null());
  EXPECT_TRUE(io::num(INFINITY).is_null());
}

TEST(Descriptors, ProblemRoundTrip) {
  const auto j = Json::parse(R"({"mass": 2, "geometry": {"d": 3, "j": 0.5, "tau": -1},
                                 "potential": {"name": "hulthen", "v": 0.2, "lambda": 0.3}})");
  const auto p = io::problem_from_json(j);
  EXPECT_EQ(p.mass, 2.0);
  EXPECT_DOUBLE_EQ(geometry_kappa(p.geometry), -1.0);
  EXPECT_EQ(p.potential.name(), "hulthen");
  const auto back = io::problem_from_json(io::to_json(p));
  EXPECT_EQ(io::dump(io::to_json(back)), io::dump(io::to_json(p)));
}

TEST(Descriptors, LineAndDimensionOne) {
  EXPECT_TRUE(is_one_dim(io::geometry_from_json("line")));
  EXPECT_TRUE(is_one_dim(io::geometry_from_json(Json::parse(R"({"d": 1, "j": 0.5, "tau": -1})"))));
}

TEST(Descriptors, CaseDefaultsAndBase) {
  const auto j = Json::parse(R"({"mass": 1, "geometry": "line", "base": "b",
      "a": {"potential": {"name": "exponential", "beta": 0.9, "b": 0.5}},
      "b": {"mass": 1, "potential": {"name": "laser_dressed", "alpha": 0.6, "a": 0.6}}})");
  const auto c = io::case_from_json(j);
  EXPECT_EQ(c.base, Base::B);
  EXPECT_TRUE(is_one_dim(c.b.geometry));
  EXPECT_EQ(io::case_from_json(io::to_json(c)).base, Base::B);
}

TEST(Descriptors, MalformedInputThrows) {
  EXPECT_THROW(io::potential_from_json(Json::parse(R"({"beta": 1})")), std::invalid_argument);
  EXPECT_THROW(io::potential_from_json(Json::parse(R"({"name": "exponential", "beta": "x", "b": 1})")),
               std::invalid_argument);
  EXPECT_THROW(io::potential_from_json(Json::parse(R"({"name": "nope"})")), std::exception);
  EXPECT_THROW(io::geometry_from_json("plane"), std::invalid_argument);
  EXPECT_THROW(io::geometry_from_json(Json::parse(R"({"d": 2.5, "j": 0.5, "tau": -1})")),
               std::invalid_argument);
  EXPECT_THROW(io::problem_from_json(Json::parse(R"({"geometry": "line"})")), std::invalid_argument);
  EXPECT_THROW(io::case_from_json(Json::parse(R"({"a": {}})")), std::invalid_argument);
  const auto bad_base = Json::parse(R"({"mass": 1, "geometry": "line", "base": "c",
      "a": {"potential": {"name": "exponential", "beta": 0.9, "b": 0.5}},
      "b": {"potential": {"name": "exponential", "beta": 0.8, "b": 0.5}}})");
  EXPECT_THROW(io::case_from_json(bad_base), std::invalid_argument);
}

TEST(Descriptors, TabulatedArrays) {
  const auto p = io::potential_from_json(
      Json::parse(R"({"name": "tabulated", "r": [0, 1, 2, 3], "V": [-1, -0.5, -0.2, 0]})"));
  EXPECT_EQ(p.name(), "tabulated");
  EXPECT_NEAR(p(1.0), -0.5, 1e-12);
  EXPECT_THROW(io::potential_from_json(Json::parse(R"({"name": "tabulated", "r": [0, 1]})")),
               std::invalid_argument);
}

TEST(Output, DeterministicSolutionJson) {
  const Problem p(1, OneDim{}, family::Exponential{0.9, 0.5});
  const auto a = io::dump(io::solution_json(p, solve_ground(p)));
  const auto b = io::dump(io::solution_json(p, solve_ground(p)));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.back(), '\n');
  const auto j = Json::parse(a);
  EXPECT_NEAR(j["energy"].get<double>(), 0.49233, 5e-5);
  EXPECT_EQ(j["nodes"]["psi1"], 0);
  EXPECT_EQ(j["sector"], "line");
}

TEST(Output, CoulombSolutionJson) {
  const auto j = io::solution_json(coulomb_ground(0.508, 2));
  EXPECT_NEAR(j["energy"].get<double>(), 2 * std::sqrt(1 - 0.508 * 0.508), 1e-8);
  EXPECT_EQ(j["potential"]["name"], "coulomb");
}

TEST(Output, CsvHeaders) {
  const auto s = solve_ground(Problem(1, OneDim{}, family::Exponential{0.9, 0.5}));
  std::ostringstream w;
  io::write_wave_csv(w, s);
  EXPECT_EQ(w.str().substr(0, w.str().find('\n')), "r,psi1,psi2");

  std::vector<double> grid{0, 1, 2};
  std::ostringstream g;
  io::write_wave_csv(g, coulomb_ground(0.5, 1), grid);
  std::string line;
  std::istringstream in(g.str());
  int n = 0;
  while (std::getline(in, line)) ++n;
  EXPECT_EQ(n, 4);

  const auto c = cumulative_integral([](double) { return 1.0; }, grid);
  std::ostringstream cc;
  io::write_curve_csv(cc, c);
  EXPECT_EQ(cc.str(), "r,value\n0,0\n1,1\n2,2\n");
}

TEST(Output, ReportStructure) {
  const ComparisonCase c(Problem(1, OneDim{}, family::Exponential{0.9, 0.5}),
                         Problem(1, OneDim{}, family::Exponential{0.8, 0.5}));
  const auto j = io::report_json(end_to_end(c, {}, Theorem::T1));
  EXPECT_TRUE(j.contains("case"));
  EXPECT_TRUE(j["all_consistent"].get<bool>());
  ASSERT_EQ(j["verdicts"].size(), 2u);
  EXPECT_EQ(j["verdicts"][0]["form"], "theorem");
  EXPECT_EQ(j["verdicts"][1]["form"], "corollary");
  EXPECT_EQ(j["verdicts"][0]["predicted"], "Ea<=Eb");
}
