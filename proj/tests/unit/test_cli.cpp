#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "cli.hpp"

namespace fs = std::filesystem;
using namespace dirac;
using io::Json;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    std::mt19937_64 rng(std::random_device{}());
    dir_ = fs::temp_directory_path() / ("dirac_cli_" + std::to_string(rng()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& text) {
    const auto p = dir_ / name;
    std::ofstream(p) << text;
    return p;
  }

  int run(std::vector<std::string> args) {
    args.insert(args.begin(), "dirac-compare");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    return cli::run(static_cast<int>(argv.size()), argv.data());
  }

  static std::string read(const fs::path& p) {
    std::ifstream is(p);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
  }

  static std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
  }

  static std::vector<std::string> fields(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    for (std::string f; std::getline(in, f, ',');) out.push_back(f);
    return out;
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, Catalog) { EXPECT_EQ(run({"catalog"}), cli::kOk); }

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run({}), cli::kUsage);
  EXPECT_EQ(run({"bogus"}), cli::kUsage);
  EXPECT_EQ(run({"reproduce", "nope", "--out", dir_.string()}), cli::kUsage);
  EXPECT_THROW(cli::reproduce("nope"), std::invalid_argument);
  const auto bad = write("bad.json", "{ not json");
  EXPECT_EQ(run({"solve", "--config", bad.string(), "--out", dir_.string()}), cli::kUsage);
}

TEST_F(Cli, SolveWritesSolution) {
  const auto cfg = write("p.json", cli::example_descriptor("fig1").dump());
  ASSERT_EQ(run({"solve", "--config", cfg.string(), "--out", dir_.string()}), cli::kOk);
  const auto j = Json::parse(read(dir_ / "solution.json"));
  EXPECT_NEAR(j["energy"].get<double>(), 0.49233, 5e-5);
  const auto wave = lines(read(dir_ / "wave.csv"));
  ASSERT_GT(wave.size(), 10u);
  EXPECT_EQ(wave[0], "r,psi1,psi2");
}

TEST_F(Cli, SolveWithoutBoundState) {
  const auto cfg = write("p.json", R"({"mass": 1, "geometry": {"d": 3, "j": 0.5, "tau": -1},
                                       "potential": {"name": "exponential", "beta": 0, "b": 1}})");
  EXPECT_EQ(run({"solve", "--config", cfg.string(), "--out", dir_.string()}), cli::kNoBoundState);
  const auto j = Json::parse(read(dir_ / "solution.json"));
  EXPECT_TRUE(j.contains("error"));
}

TEST_F(Cli, CompareOutputs) {
  const auto cfg = write("c.json", cli::example_descriptor("sec3").dump());
  ASSERT_EQ(run({"compare", "--config", cfg.string(), "--out", dir_.string(), "--theorem", "1"}),
            cli::kOk);
  const auto rep = Json::parse(read(dir_ / "report.json"));
  EXPECT_TRUE(rep["all_consistent"].get<bool>());
  EXPECT_EQ(rep["crossings"].size(), 2u);
  EXPECT_TRUE(fs::exists(dir_ / "curves" / "T1_unit.csv"));
  const auto pot = lines(read(dir_ / "potentials.csv"));
  ASSERT_GT(pot.size(), 2u);
  EXPECT_EQ(pot[0].substr(0, 11), "r,Va,Vb,dV,");
}

TEST_F(Cli, DefaultBasePrefersExactOracle) {
  const auto c = io::case_from_json(cli::example_descriptor("sec5b"));
  EXPECT_EQ(cli::default_base(ComparisonCase(c.a, c.b)), Base::B);
  const auto l = io::case_from_json(cli::example_descriptor("sec3"));
  EXPECT_EQ(cli::default_base(l), Base::A);
}

TEST_F(Cli, EmptySweepIsHeaderOnly) {
  const auto cfg = write("s.json", R"({"problem": )" + cli::example_descriptor("fig1").dump() +
                                       R"(, "sweep": [{"path": "potential.beta", "from": 0.5,
                                            "to": 0.9, "steps": 0}]})");
  ASSERT_EQ(run({"sweep", "--config", cfg.string(), "--out", dir_.string()}), cli::kOk);
  EXPECT_EQ(read(dir_ / "sweep.csv"), "potential.beta,E,nodes1,nodes2,norm,status\n");
}

TEST_F(Cli, DepthSweepIsMonotone) {
  const auto cfg = cli::sweep_from_json(Json::parse(
      R"({"problem": )" + cli::example_descriptor("fig1").dump() +
      R"(, "sweep": [{"path": "potential.beta", "from": 0.5, "to": 0.9, "steps": 9}],
          "threads": 3})"));
  const auto rows = lines(cli::run_sweep(cfg, {}));
  ASSERT_EQ(rows.size(), 10u);
  double prev = 1.0, beta_prev = 0.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto f = fields(rows[i]);
    ASSERT_EQ(f.back(), "ok");
    EXPECT_GT(std::stod(f[0]), beta_prev);
    beta_prev = std::stod(f[0]);
    EXPECT_LT(std::stod(f[1]), prev);
    prev = std::stod(f[1]);
  }
}

TEST_F(Cli, MassSweepScalesCoulomb) {
  const auto cfg = cli::sweep_from_json(Json::parse(R"({
      "problem": {"mass": 1, "geometry": {"d": 3, "j": 0.5, "tau": -1},
                  "potential": {"name": "coulomb", "v": 0.508}},
      "sweep": [{"path": "mass", "values": [1, 2]}]})"));
  const auto rows = lines(cli::run_sweep(cfg, {}));
  ASSERT_EQ(rows.size(), 3u);
  const double g = std::sqrt(1 - 0.508 * 0.508);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto f = fields(rows[i]);
    EXPECT_NEAR(std::stod(f[1]) / std::stod(f[0]), g, 1e-7);
  }
}

TEST_F(Cli, CaseSweepReportsVerdicts) {
  const auto cfg = cli::sweep_from_json(Json::parse(R"({
      "case": {"mass": 1, "geometry": "line",
               "a": {"potential": {"name": "exponential", "beta": 0.9, "b": 0.5}},
               "b": {"potential": {"name": "exponential", "beta": 0.8, "b": 0.5}}},
      "sweep": [{"path": "b.potential.beta", "values": [0.6, 0.0]}], "theorem": 1})"));
  const auto rows = lines(cli::run_sweep(cfg, {}));
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_NE(rows[1].find("T1=holds"), std::string::npos);
  EXPECT_NE(rows[2].find("b: "), std::string::npos);
}

TEST_F(Cli, ReproduceLineExample) {
  ASSERT_EQ(run({"reproduce", "fig1", "--out", dir_.string()}), cli::kOk);
  const auto csv = lines(read(dir_ / "reproduce_fig1.csv"));
  ASSERT_EQ(csv.size(), 2u);
  EXPECT_EQ(fields(csv[1]).back(), "1");
  EXPECT_TRUE(fs::exists(dir_ / "reproduce_fig1.md"));
}
