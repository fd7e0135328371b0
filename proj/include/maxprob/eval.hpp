#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "maxprob/classifier.hpp"
#include "maxprob/data.hpp"
#include "maxprob/lp.hpp"

namespace maxprob {

struct PrecisionRecall {
  double precision = 1.0;
  double recall = 1.0;
  bool precision_degenerate = false;  // no predicted positives in scope
  bool recall_degenerate = false;     // no true positives in scope
};

/// Both measures over the scope indices only. Degenerate denominators report
/// 1.0 and raise the matching flag.
PrecisionRecall precision_recall(const std::vector<uint8_t>& predicted,
                                 const std::vector<uint8_t>& truth,
                                 const std::vector<int>& scope);

struct MetricsRecord {
  int sample_size = 0;
  int run = 0;
  double precision = 0.0;
  double recall = 0.0;
  double objective = 0.0;
  SolveStatus status = SolveStatus::kOptimal;
  double wall_ms = 0.0;
  bool precision_degenerate = false;
  bool recall_degenerate = false;
};

struct SweepConfig {
  std::vector<int> sizes;   // labeled-sample sizes, strictly increasing
  int repetitions = 100;
  uint64_t base_seed = 0;
  ModeConfig mode{};
  int t_size = 0;           // 0: round(N/3)
  int s_size = 0;           // 0: remainder
  SolveLimits limits{};
  int threads = 1;
  bool measure_wall = false;  // physical timing is inherently non-reproducible

  void validate() const;
};

/// Runs repetitions x sizes experiments: per repetition a fresh T/S split,
/// per (size, repetition) a fresh labeled sample from T intersect class; the
/// program is solved over labeled + S and scored on S. Failed solves become
/// records with their status instead of aborting the sweep. Records come out
/// sorted by (sample_size, run) and are bit-identical for a fixed base seed
/// regardless of thread count.
std::vector<MetricsRecord> run_sweep(const Dataset& dataset, const SweepConfig& config);

struct AggregateRow {
  int sample_size = 0;
  std::string metric;  // "precision" or "recall"
  double mean = 0.0;
  double q10 = 0.0;
  double q90 = 0.0;
  int n_ok = 0;
  int n_fail = 0;
};

/// Mean plus nearest-rank 10%/90% quantiles per (sample size, metric).
/// Non-OPTIMAL records are excluded from the statistics and counted in
/// n_fail. Order-insensitive in its input.
std::vector<AggregateRow> aggregate(const std::vector<MetricsRecord>& records);

/// Exact wire formats: headers below, LF endings, 9 significant digits.
///   sample_size,run,precision,recall,objective,status,wall_ms
///   sample_size,metric,mean,q10,q90,n_ok,n_fail
void write_records_csv(std::ostream& out, const std::vector<MetricsRecord>& records);
void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows);

double nearest_rank_quantile(std::vector<double> values, double p);

}  // namespace maxprob
