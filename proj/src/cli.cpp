#include "maxprob/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "maxprob/common.hpp"
#include "maxprob/data.hpp"
#include "maxprob/eval.hpp"
#include "maxprob/rng.hpp"

namespace maxprob {

namespace {

using nlohmann::json;

std::string manifest_path(const std::string& explicit_path, const std::string& output) {
  return explicit_path.empty() ? output + ".manifest.json" : explicit_path;
}

void write_manifest(const std::string& path, const std::string& command, const json& args) {
  json doc;
  doc["tool"] = "maxprob";
  doc["version"] = kToolVersion;
  doc["command"] = command;
  doc["args"] = args;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write manifest " + path);
  out << doc.dump(2) << "\n";
}

json load_manifest(const std::string& path, const std::string& expected_command) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open manifest " + path);
  json doc = json::parse(in);
  if (doc.value("command", "") != expected_command)
    throw std::invalid_argument("manifest " + path + " was written by command '" +
                                doc.value("command", "") + "'");
  return doc["args"];
}

json to_json(const SynthArgs& a) {
  return json{{"generator", a.generator}, {"class_count", a.class_count},
              {"other_count", a.other_count}, {"dim", a.dim},
              {"seed", a.seed}, {"output", a.output},
              {"manifest_out", a.manifest_out}};
}

SynthArgs synth_from_json(const json& j) {
  SynthArgs a;
  a.generator = j.at("generator");
  a.class_count = j.at("class_count");
  a.other_count = j.at("other_count");
  a.dim = j.at("dim");
  a.seed = j.at("seed");
  a.output = j.at("output");
  a.manifest_out = j.value("manifest_out", "");
  return a;
}

json to_json(const ClassifyArgs& a) {
  json j{{"input", a.input},         {"output", a.output},
         {"manifest_out", a.manifest_out}, {"has_header", a.has_header},
         {"label_col", a.label_col}, {"indices_file", a.indices_file},
         {"labeled_count", a.labeled_count}, {"seed", a.seed},
         {"mode", a.mode},           {"kappa", a.kappa},
         {"theta", a.theta},         {"pin_labeled", a.pin_labeled},
         {"standardize", a.standardize}, {"kernel", a.kernel},
         {"gamma", a.gamma},         {"degree", a.degree},
         {"coef0", a.coef0},         {"landmarks", a.landmarks},
         {"landmark_seed", a.landmark_seed}, {"alpha", a.alpha}};
  if (a.epsilon) j["epsilon"] = *a.epsilon;
  return j;
}

ClassifyArgs classify_from_json(const json& j) {
  ClassifyArgs a;
  a.input = j.at("input");
  a.output = j.at("output");
  a.manifest_out = j.value("manifest_out", "");
  a.has_header = j.at("has_header");
  a.label_col = j.at("label_col");
  a.indices_file = j.value("indices_file", "");
  a.labeled_count = j.at("labeled_count");
  a.seed = j.at("seed");
  a.mode = j.at("mode");
  a.kappa = j.at("kappa");
  if (j.contains("epsilon")) a.epsilon = j["epsilon"].get<double>();
  a.theta = j.at("theta");
  a.pin_labeled = j.at("pin_labeled");
  a.standardize = j.at("standardize");
  a.kernel = j.at("kernel");
  a.gamma = j.at("gamma");
  a.degree = j.at("degree");
  a.coef0 = j.at("coef0");
  a.landmarks = j.at("landmarks");
  a.landmark_seed = j.at("landmark_seed");
  a.alpha = j.value("alpha", std::vector<double>{});
  return a;
}

json to_json(const ExperimentArgs& a) {
  json j{{"input", a.input},
         {"records_out", a.records_out},
         {"aggregate_out", a.aggregate_out},
         {"manifest_out", a.manifest_out},
         {"has_header", a.has_header},
         {"label_col", a.label_col},
         {"sizes", a.sizes},
         {"repetitions", a.repetitions},
         {"seed", a.seed},
         {"t_size", a.t_size},
         {"s_size", a.s_size},
         {"mode", a.mode},
         {"kappa", a.kappa},
         {"theta", a.theta},
         {"pin_labeled", a.pin_labeled},
         {"standardize", a.standardize},
         {"kernel", a.kernel},
         {"gamma", a.gamma},
         {"degree", a.degree},
         {"coef0", a.coef0},
         {"landmarks", a.landmarks},
         {"landmark_seed", a.landmark_seed},
         {"threads", a.threads},
         {"timing", a.timing}};
  if (a.epsilon) j["epsilon"] = *a.epsilon;
  return j;
}

ExperimentArgs experiment_from_json(const json& j) {
  ExperimentArgs a;
  a.input = j.at("input");
  a.records_out = j.at("records_out");
  a.aggregate_out = j.at("aggregate_out");
  a.manifest_out = j.value("manifest_out", "");
  a.has_header = j.at("has_header");
  a.label_col = j.at("label_col");
  a.sizes = j.at("sizes");
  a.repetitions = j.at("repetitions");
  a.seed = j.at("seed");
  a.t_size = j.at("t_size");
  a.s_size = j.at("s_size");
  a.mode = j.at("mode");
  a.kappa = j.at("kappa");
  if (j.contains("epsilon")) a.epsilon = j["epsilon"].get<double>();
  a.theta = j.at("theta");
  a.pin_labeled = j.at("pin_labeled");
  a.standardize = j.at("standardize");
  a.kernel = j.at("kernel");
  a.gamma = j.at("gamma");
  a.degree = j.at("degree");
  a.coef0 = j.at("coef0");
  a.landmarks = j.at("landmarks");
  a.landmark_seed = j.at("landmark_seed");
  a.threads = j.at("threads");
  a.timing = j.at("timing");
  return a;
}

Mode parse_mode(const std::string& text) {
  if (text == "linear") return Mode::kLinear;
  if (text == "second-order" || text == "second") return Mode::kSecondOrder;
  if (text == "kernel") return Mode::kKernel;
  throw std::invalid_argument("unknown mode '" + text + "'");
}

KernelSpec parse_kernel(const std::string& kind, double gamma, int degree, double coef0) {
  KernelSpec spec;
  if (kind == "rbf")
    spec.kind = KernelKind::kRbf;
  else if (kind == "linear")
    spec.kind = KernelKind::kLinear;
  else if (kind == "polynomial" || kind == "poly")
    spec.kind = KernelKind::kPolynomial;
  else
    throw std::invalid_argument("unknown kernel '" + kind + "'");
  spec.gamma = gamma;
  spec.degree = degree;
  spec.coef0 = coef0;
  spec.validate();
  return spec;
}

template <typename Args>
ModeConfig mode_config_from(const Args& a) {
  ModeConfig config;
  config.mode = parse_mode(a.mode);
  config.kernel = parse_kernel(a.kernel, a.gamma, a.degree, a.coef0);
  if (a.landmarks > 0) {
    config.landmarks.use_all = false;
    config.landmarks.count = a.landmarks;
    config.landmarks.seed = a.landmark_seed;
  }
  config.kappa = a.kappa;
  config.fixed_epsilon = a.epsilon;
  config.threshold = a.theta;
  config.pin_labeled = a.pin_labeled;
  config.standardize = a.standardize;
  return config;
}

int default_threads() {
  if (const char* env = std::getenv("MAXPROB_THREADS")) {
    int value = std::atoi(env);
    if (value > 0) return value;
  }
  return 1;
}

std::vector<int> read_index_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open index file " + path);
  std::vector<int> indices;
  long long value;
  while (in >> value) indices.push_back(static_cast<int>(value));
  if (indices.empty()) throw std::invalid_argument("index file " + path + " is empty");
  return indices;
}

int usage_error(const std::string& message) {
  std::cerr << "maxprob: " << message << "\n";
  return kExitUsage;
}

}  // namespace

std::vector<int> parse_sizes(const std::string& text) {
  std::vector<int> sizes;
  if (text.find(':') != std::string::npos) {
    int start = 0, stop = 0, step = 0;
    char c1 = 0, c2 = 0;
    std::istringstream ss(text);
    if (!(ss >> start >> c1 >> stop >> c2 >> step) || c1 != ':' || c2 != ':' || step < 1 ||
        start < 1 || stop < start)
      throw std::invalid_argument("bad size range '" + text + "' (want start:stop:step)");
    for (int v = start; v <= stop; v += step) sizes.push_back(v);
  } else {
    std::istringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      sizes.push_back(std::stoi(item));
    }
    if (sizes.empty()) throw std::invalid_argument("no sizes in '" + text + "'");
  }
  return sizes;
}

int cmd_synth(const SynthArgs& args) {
  try {
    Dataset ds;
    if (args.generator == "halfspace")
      ds = gen_halfspace(args.seed, args.class_count, args.other_count, args.dim);
    else if (args.generator == "gaussian")
      ds = gen_gaussian(args.seed, args.class_count, args.other_count, args.dim);
    else if (args.generator == "ring")
      ds = gen_ring(args.seed, args.class_count, args.other_count, args.dim);
    else
      return usage_error("unknown generator '" + args.generator +
                         "' (want halfspace, gaussian, or ring)");
    write_csv(args.output, ds, /*with_header=*/true);
    write_manifest(manifest_path(args.manifest_out, args.output), "synth", to_json(args));
  } catch (const std::exception& e) {
    return usage_error(e.what());
  }
  return kExitOk;
}

int cmd_classify(const ClassifyArgs& args) {
  try {
    CsvOptions opts;
    opts.has_header = args.has_header;
    if (args.label_col >= 0) opts.label_column = args.label_col;
    Dataset ds = load_csv(args.input, opts);

    std::vector<int> labeled;
    if (!args.indices_file.empty()) {
      labeled = read_index_file(args.indices_file);
    } else {
      if (args.label_col < 0 || args.labeled_count < 1)
        return usage_error("need --indices, or --label-col plus --l to sample labeled points");
      std::vector<int> all(ds.size());
      for (int i = 0; i < ds.size(); ++i) all[i] = i;
      labeled = sample_class_indices(ds, all, args.labeled_count, child_seed(args.seed, 0x11));
    }

    ModeConfig config = mode_config_from(args);
    if (!args.alpha.empty()) {
      Eigen::VectorXd alpha(args.alpha.size());
      for (size_t i = 0; i < args.alpha.size(); ++i) alpha[i] = args.alpha[i];
      config.alpha_override = alpha;
    }

    TransduceResult result = transduce_detailed(ds, labeled, config);
    std::vector<uint8_t> hard = harden(result.labeling, config.threshold);

    std::ofstream out(args.output, std::ios::binary);
    if (!out) return usage_error("cannot write " + args.output);
    out << "index,fuzzy,label\n";
    for (int i = 0; i < ds.size(); ++i)
      out << i << ',' << format_g9(result.labeling.values[i]) << ',' << int(hard[i]) << '\n';

    write_manifest(manifest_path(args.manifest_out, args.output), "classify", to_json(args));
  } catch (const InfeasibleModelError& e) {
    std::cerr << "maxprob: infeasible: " << e.what()
              << " (residual " << format_g9(e.residual()) << ")\n";
    return kExitInfeasible;
  } catch (const std::exception& e) {
    return usage_error(e.what());
  }
  return kExitOk;
}

int cmd_experiment(const ExperimentArgs& args) {
  try {
    CsvOptions opts;
    opts.has_header = args.has_header;
    if (args.label_col >= 0) opts.label_column = args.label_col;
    Dataset ds = load_csv(args.input, opts);
    if (!ds.truth) return usage_error("experiment needs a truth column (--label-col)");

    SweepConfig config;
    config.sizes = parse_sizes(args.sizes);
    config.repetitions = args.repetitions;
    config.base_seed = args.seed;
    config.mode = mode_config_from(args);
    config.t_size = args.t_size;
    config.s_size = args.s_size;
    config.threads = args.threads > 0 ? args.threads : default_threads();
    config.measure_wall = args.timing;

    std::vector<MetricsRecord> records = run_sweep(ds, config);

    std::ofstream rec_out(args.records_out, std::ios::binary);
    if (!rec_out) return usage_error("cannot write " + args.records_out);
    write_records_csv(rec_out, records);

    std::ofstream agg_out(args.aggregate_out, std::ios::binary);
    if (!agg_out) return usage_error("cannot write " + args.aggregate_out);
    write_aggregate_csv(agg_out, aggregate(records));

    write_manifest(manifest_path(args.manifest_out, args.records_out), "experiment",
                   to_json(args));
  } catch (const std::exception& e) {
    return usage_error(e.what());
  }
  return kExitOk;
}

int cmd_solve(const SolveArgs& args) {
  try {
    std::ifstream in(args.input);
    if (!in) return usage_error("cannot open " + args.input);
    LpProblem problem = read_problem(in);
    LpSolution solution = solve(problem);

    std::ostringstream report;
    report << "status " << to_string(solution.status) << "\n";
    if (solution.status == SolveStatus::kOptimal) {
      report << "objective " << format_g9(solution.objective_value) << "\n";
      report << "values";
      for (int j = 0; j < solution.values.size(); ++j)
        report << ' ' << format_g9(solution.values[j]);
      report << "\nrow_duals";
      for (int k = 0; k < solution.row_duals.size(); ++k)
        report << ' ' << format_g9(solution.row_duals[k]);
      report << "\n";
    } else if (solution.status == SolveStatus::kInfeasible) {
      report << "infeasibility " << format_g9(solution.infeasibility) << "\n";
    }
    report << "iterations " << solution.iterations << "\n";

    if (args.output.empty()) {
      std::cout << report.str();
    } else {
      std::ofstream out(args.output, std::ios::binary);
      if (!out) return usage_error("cannot write " + args.output);
      out << report.str();
    }
    if (solution.status == SolveStatus::kInfeasible) {
      std::cerr << "maxprob: model infeasible (residual "
                << format_g9(solution.infeasibility) << ")\n";
      return kExitInfeasible;
    }
    if (solution.status != SolveStatus::kOptimal)
      return usage_error(std::string("solve ended with status ") + to_string(solution.status));
  } catch (const std::exception& e) {
    return usage_error(e.what());
  }
  return kExitOk;
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Transductive one-class labeling via maximal-probability linear programs"};
  app.require_subcommand(1);

  SynthArgs synth;
  std::string synth_manifest_in;
  auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic labeled dataset");
  synth_cmd->add_option("generator", synth.generator, "halfspace | gaussian | ring");
  synth_cmd->add_option("--class", synth.class_count, "class point count");
  synth_cmd->add_option("--other", synth.other_count, "non-class point count");
  synth_cmd->add_option("--dim", synth.dim, "dimension");
  synth_cmd->add_option("--seed", synth.seed, "generator seed");
  synth_cmd->add_option("--out", synth.output, "output CSV path");
  synth_cmd->add_option("--manifest-out", synth.manifest_out, "manifest path");
  synth_cmd->add_option("--from-manifest", synth_manifest_in, "replay a recorded run");

  ClassifyArgs classify;
  std::string classify_manifest_in, classify_alpha;
  auto* classify_cmd = app.add_subcommand("classify", "label a dataset transductively");
  classify_cmd->add_option("--input", classify.input, "dataset CSV");
  classify_cmd->add_option("--out", classify.output, "per-point output CSV");
  classify_cmd->add_option("--manifest-out", classify.manifest_out, "manifest path");
  classify_cmd->add_flag("--header,!--no-header", classify.has_header, "input has a header row");
  classify_cmd->add_option("--label-col", classify.label_col, "truth column (zero-based)");
  classify_cmd->add_option("--indices", classify.indices_file, "labeled index file");
  classify_cmd->add_option("--l", classify.labeled_count, "labeled sample size");
  classify_cmd->add_option("--seed", classify.seed, "labeled sampling seed");
  classify_cmd->add_option("--mode", classify.mode, "linear | second-order | kernel");
  classify_cmd->add_option("--kappa", classify.kappa, "epsilon = kappa * spread / sqrt(l)");
  double classify_eps = -1.0;
  classify_cmd->add_option("--epsilon", classify_eps, "fixed per-row epsilon (overrides kappa)");
  classify_cmd->add_option("--theta", classify.theta, "hard-label threshold");
  classify_cmd->add_flag("--pin,!--no-pin", classify.pin_labeled, "pin labeled points at 1");
  classify_cmd->add_flag("--standardize", classify.standardize, "standardize features first");
  classify_cmd->add_option("--kernel", classify.kernel, "rbf | linear | polynomial");
  classify_cmd->add_option("--gamma", classify.gamma, "rbf gamma");
  classify_cmd->add_option("--degree", classify.degree, "polynomial degree");
  classify_cmd->add_option("--coef0", classify.coef0, "polynomial offset");
  classify_cmd->add_option("--landmarks", classify.landmarks, "kernel landmark count (0 = all)");
  classify_cmd->add_option("--landmark-seed", classify.landmark_seed, "landmark sampling seed");
  classify_cmd->add_option("--alpha", classify_alpha, "explicit mean, comma separated");
  classify_cmd->add_option("--from-manifest", classify_manifest_in, "replay a recorded run");

  ExperimentArgs experiment;
  std::string experiment_manifest_in;
  auto* exp_cmd = app.add_subcommand("experiment", "sample-size sweep with precision/recall");
  exp_cmd->add_option("--input", experiment.input, "dataset CSV with truth column");
  exp_cmd->add_option("--out", experiment.records_out, "records CSV path");
  exp_cmd->add_option("--aggregate-out", experiment.aggregate_out, "aggregate CSV path");
  exp_cmd->add_option("--manifest-out", experiment.manifest_out, "manifest path");
  exp_cmd->add_flag("--header,!--no-header", experiment.has_header, "input has a header row");
  exp_cmd->add_option("--label-col", experiment.label_col, "truth column (zero-based)");
  exp_cmd->add_option("--sizes", experiment.sizes, "start:stop:step or comma list");
  exp_cmd->add_option("--reps", experiment.repetitions, "repetitions per size");
  exp_cmd->add_option("--seed", experiment.seed, "base seed");
  exp_cmd->add_option("--t-size", experiment.t_size, "sampling pool size");
  exp_cmd->add_option("--s-size", experiment.s_size, "evaluation set size");
  exp_cmd->add_option("--mode", experiment.mode, "linear | second-order | kernel");
  exp_cmd->add_option("--kappa", experiment.kappa, "epsilon = kappa * spread / sqrt(l)");
  double experiment_eps = -1.0;
  exp_cmd->add_option("--epsilon", experiment_eps, "fixed per-row epsilon");
  exp_cmd->add_option("--theta", experiment.theta, "hard-label threshold");
  exp_cmd->add_flag("--pin,!--no-pin", experiment.pin_labeled, "pin labeled points at 1");
  exp_cmd->add_flag("--standardize", experiment.standardize, "standardize features first");
  exp_cmd->add_option("--kernel", experiment.kernel, "rbf | linear | polynomial");
  exp_cmd->add_option("--gamma", experiment.gamma, "rbf gamma");
  exp_cmd->add_option("--degree", experiment.degree, "polynomial degree");
  exp_cmd->add_option("--coef0", experiment.coef0, "polynomial offset");
  exp_cmd->add_option("--landmarks", experiment.landmarks, "kernel landmark count");
  exp_cmd->add_option("--landmark-seed", experiment.landmark_seed, "landmark sampling seed");
  exp_cmd->add_option("--threads", experiment.threads, "worker threads (default $MAXPROB_THREADS)");
  exp_cmd->add_flag("--timing", experiment.timing, "record wall-clock times (non-reproducible)");
  exp_cmd->add_option("--from-manifest", experiment_manifest_in, "replay a recorded run");

  SolveArgs solve_args;
  auto* solve_cmd = app.add_subcommand("solve", "solve a debug LP dump");
  solve_cmd->add_option("--input", solve_args.input, "LP dump path")->required();
  solve_cmd->add_option("--out", solve_args.output, "solution output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (synth_cmd->parsed()) {
      if (!synth_manifest_in.empty())
        return cmd_synth(synth_from_json(load_manifest(synth_manifest_in, "synth")));
      if (synth.generator.empty()) return usage_error("synth needs a generator name");
      return cmd_synth(synth);
    }
    if (classify_cmd->parsed()) {
      if (!classify_manifest_in.empty())
        return cmd_classify(classify_from_json(load_manifest(classify_manifest_in, "classify")));
      if (classify.input.empty()) return usage_error("classify needs --input");
      if (classify_eps >= 0.0) classify.epsilon = classify_eps;
      if (!classify_alpha.empty()) {
        std::istringstream ss(classify_alpha);
        std::string item;
        while (std::getline(ss, item, ','))
          if (!item.empty()) classify.alpha.push_back(std::stod(item));
      }
      return cmd_classify(classify);
    }
    if (exp_cmd->parsed()) {
      if (!experiment_manifest_in.empty())
        return cmd_experiment(
            experiment_from_json(load_manifest(experiment_manifest_in, "experiment")));
      if (experiment.input.empty()) return usage_error("experiment needs --input");
      if (experiment_eps >= 0.0) experiment.epsilon = experiment_eps;
      return cmd_experiment(experiment);
    }
    if (solve_cmd->parsed()) return cmd_solve(solve_args);
  } catch (const std::exception& e) {
    return usage_error(e.what());
  }
  return usage_error("no subcommand given");
}

}  // namespace maxprob
