#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace maxprob {

// Exit code contract: 0 success, 1 usage/input error, 2 infeasible model.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitInfeasible = 2;

struct SynthArgs {
  std::string generator;  // halfspace | gaussian | ring
  int class_count = 300;
  int other_count = 750;
  int dim = 2;
  uint64_t seed = 0;
  std::string output = "dataset.csv";
  std::string manifest_out;  // empty: <output>.manifest.json
};

struct ClassifyArgs {
  std::string input;
  std::string output = "labels.csv";
  std::string manifest_out;
  bool has_header = true;
  int label_col = -1;          // -1: no truth column
  std::string indices_file;    // explicit labeled indices, one per line
  int labeled_count = 0;       // truth-sampling alternative
  uint64_t seed = 0;
  std::string mode = "linear";  // linear | second-order | kernel
  double kappa = 1.0;
  std::optional<double> epsilon;
  double theta = 0.5;
  bool pin_labeled = true;
  bool standardize = false;
  std::string kernel = "rbf";  // rbf | linear | polynomial
  double gamma = 1.0;
  int degree = 2;
  double coef0 = 1.0;
  int landmarks = 0;  // 0: all points
  uint64_t landmark_seed = 0;
  std::vector<double> alpha;  // explicit mean override (linear mode)
};

struct ExperimentArgs {
  std::string input;
  std::string records_out = "records.csv";
  std::string aggregate_out = "aggregate.csv";
  std::string manifest_out;
  bool has_header = true;
  int label_col = 0;
  std::string sizes = "25:500:25";  // start:end:step or comma list
  int repetitions = 100;
  uint64_t seed = 0;
  int t_size = 0;
  int s_size = 0;
  std::string mode = "linear";
  double kappa = 1.0;
  std::optional<double> epsilon;
  double theta = 0.5;
  bool pin_labeled = true;
  bool standardize = false;
  std::string kernel = "rbf";
  double gamma = 1.0;
  int degree = 2;
  double coef0 = 1.0;
  int landmarks = 0;
  uint64_t landmark_seed = 0;
  int threads = 0;  // 0: MAXPROB_THREADS env or 1
  bool timing = false;
};

struct SolveArgs {
  std::string input;
  std::string output;  // empty: stdout
};

int cmd_synth(const SynthArgs& args);
int cmd_classify(const ClassifyArgs& args);
int cmd_experiment(const ExperimentArgs& args);
int cmd_solve(const SolveArgs& args);

/// "a:b:step" (inclusive) or a comma-separated list.
std::vector<int> parse_sizes(const std::string& text);

/// Full argv entry point used by the binary; returns the process exit code.
int run_cli(int argc, const char* const* argv);

}  // namespace maxprob
