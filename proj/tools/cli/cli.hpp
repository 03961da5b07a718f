#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dirac/comparison.hpp"
#include "dirac/io.hpp"

namespace dirac::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kNoBoundState = 2,
  kSolverFailure = 3,
  kReproduceMiss = 4,
};

struct Tolerances {
  std::optional<double> energy;
  std::optional<double> integral;
};

ComparisonOptions comparison_options(const Tolerances& t);

// Base used when neither the flag nor the descriptor picks one: the problem
// with an exact oracle, otherwise a.
Base default_base(const ComparisonCase& c);

// Built-in example descriptors (problem for fig1/fig3, case otherwise).
const std::vector<std::string>& example_ids();
io::Json example_descriptor(const std::string& id);

struct ReproRow {
  std::string quantity;
  double reference = 0.0;
  double computed = 0.0;
  double tolerance = 0.0;

  double diff() const { return computed - reference; }
  bool ok() const;
};

// Throws std::invalid_argument for unknown ids.
std::vector<ReproRow> reproduce(const std::string& id, const Tolerances& t = {});

std::string summary_markdown(const std::string& id, const std::vector<ReproRow>& rows);
std::string summary_csv(const std::string& id, const std::vector<ReproRow>& rows);

// Sweep over a dotted parameter path ("potential.beta", "a.potential.v",
// "mass") of a problem or case template. Rows come back in grid order.
struct SweepAxis {
  std::string path;
  std::vector<double> values;
};

struct SweepConfig {
  io::Json base;  // {"problem": ...} or {"case": ...}
  std::vector<SweepAxis> axes;
  int threads = 0;  // 0: hardware concurrency
  std::optional<Theorem> theorem;
};

SweepConfig sweep_from_json(const io::Json& j);
std::string run_sweep(const SweepConfig& cfg, const Tolerances& t);

int run(int argc, char** argv);

}  // namespace dirac::cli
