#include "maxprob/eval.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "maxprob/common.hpp"
#include "maxprob/rng.hpp"

namespace maxprob {

PrecisionRecall precision_recall(const std::vector<uint8_t>& predicted,
                                 const std::vector<uint8_t>& truth,
                                 const std::vector<int>& scope) {
  if (predicted.size() != truth.size())
    throw std::invalid_argument("metrics: prediction/truth length mismatch");
  long tp = 0, fp = 0, fn = 0;
  for (int i : scope) {
    if (i < 0 || i >= static_cast<int>(predicted.size()))
      throw std::invalid_argument("metrics: scope index out of range");
    if (predicted[i] && truth[i]) ++tp;
    else if (predicted[i] && !truth[i]) ++fp;
    else if (!predicted[i] && truth[i]) ++fn;
  }
  PrecisionRecall out;
  if (tp + fp == 0)
    out.precision_degenerate = true;
  else
    out.precision = double(tp) / double(tp + fp);
  if (tp + fn == 0)
    out.recall_degenerate = true;
  else
    out.recall = double(tp) / double(tp + fn);
  return out;
}

void SweepConfig::validate() const {
  if (sizes.empty()) throw std::invalid_argument("sweep: no sample sizes");
  for (size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] < 1) throw std::invalid_argument("sweep: sizes must be positive");
    if (i > 0 && sizes[i] <= sizes[i - 1])
      throw std::invalid_argument("sweep: sizes must be strictly increasing");
  }
  if (repetitions < 1) throw std::invalid_argument("sweep: repetitions must be >= 1");
  mode.validate();
}

namespace {

MetricsRecord run_one(const Dataset& dataset, const SweepConfig& config, int size_index,
                      int rep) {
  MetricsRecord rec;
  rec.sample_size = config.sizes[size_index];
  rec.run = rep;

  const uint64_t rep_seed = child_seed(config.base_seed, rep);
  const int n = dataset.size();
  int t_size = config.t_size > 0 ? config.t_size : (n + 2) / 3;
  int s_size = config.s_size > 0 ? config.s_size : n - t_size;
  if (t_size < 1 || s_size < 1 || t_size + s_size > n)
    throw std::invalid_argument("sweep: T/S sizes inconsistent with dataset");

  std::vector<int> order = shuffled_indices(n, child_seed(rep_seed, 0));
  std::vector<int> pool(order.begin(), order.begin() + t_size);
  std::vector<int> eval_set(order.begin() + t_size, order.begin() + t_size + s_size);
  std::sort(pool.begin(), pool.end());
  std::sort(eval_set.begin(), eval_set.end());

  std::vector<int> labeled;
  try {
    labeled = sample_class_indices(dataset, pool, rec.sample_size,
                                   child_seed(rep_seed, 1 + size_index));
  } catch (const std::invalid_argument&) {
    rec.status = SolveStatus::kInfeasible;  // sample unavailable; count as failure
    return rec;
  }

  // The program runs over labeled + S only; the rest of T merely supplied the
  // sample, so the mean estimate is the only channel from T into S.
  const int l = static_cast<int>(labeled.size());
  Dataset sub;
  sub.name = dataset.name;
  sub.points.resize(l + s_size, dataset.dim());
  std::vector<uint8_t> sub_truth(l + s_size, 0);
  for (int j = 0; j < l; ++j) {
    sub.points.row(j) = dataset.points.row(labeled[j]);
    sub_truth[j] = (*dataset.truth)[labeled[j]];
  }
  for (int j = 0; j < s_size; ++j) {
    sub.points.row(l + j) = dataset.points.row(eval_set[j]);
    sub_truth[l + j] = (*dataset.truth)[eval_set[j]];
  }
  std::vector<int> sub_labeled(l);
  for (int j = 0; j < l; ++j) sub_labeled[j] = j;
  std::vector<int> sub_scope(s_size);
  for (int j = 0; j < s_size; ++j) sub_scope[j] = l + j;

  auto t0 = std::chrono::steady_clock::now();
  try {
    TransduceResult res = transduce_detailed(sub, sub_labeled, config.mode, config.limits);
    rec.status = SolveStatus::kOptimal;
    rec.objective = res.labeling.objective;
    std::vector<uint8_t> hard = harden(res.labeling, config.mode.threshold);
    PrecisionRecall pr = precision_recall(hard, sub_truth, sub_scope);
    rec.precision = pr.precision;
    rec.recall = pr.recall;
    rec.precision_degenerate = pr.precision_degenerate;
    rec.recall_degenerate = pr.recall_degenerate;
  } catch (const InfeasibleModelError&) {
    rec.status = SolveStatus::kInfeasible;
  } catch (const IterationLimitError&) {
    rec.status = SolveStatus::kIterationLimit;
  }
  if (config.measure_wall) {
    auto t1 = std::chrono::steady_clock::now();
    rec.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  }
  return rec;
}

}  // namespace

std::vector<MetricsRecord> run_sweep(const Dataset& dataset, const SweepConfig& config) {
  config.validate();
  if (!dataset.truth) throw std::invalid_argument("sweep: dataset has no truth labels");

  const int n_sizes = static_cast<int>(config.sizes.size());
  const int n_tasks = n_sizes * config.repetitions;
  std::vector<MetricsRecord> records(n_tasks);

  // Records land in fixed slots; every task owns derived seeds, so the thread
  // schedule cannot influence any output byte.
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (;;) {
      int task = next.fetch_add(1);
      if (task >= n_tasks) return;
      int size_index = task / config.repetitions;
      int rep = task % config.repetitions;
      records[task] = run_one(dataset, config, size_index, rep);
    }
  };

  int threads = std::max(1, config.threads);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> crew;
    crew.reserve(threads);
    for (int t = 0; t < threads; ++t) crew.emplace_back(worker);
    for (auto& th : crew) th.join();
  }
  return records;  // already (sample_size, run) ordered by slot layout
}

double nearest_rank_quantile(std::vector<double> values, double p) {
  if (values.empty()) throw std::invalid_argument("quantile of empty set");
  std::sort(values.begin(), values.end());
  int rank = static_cast<int>(std::ceil(p * double(values.size())));
  rank = std::clamp(rank, 1, static_cast<int>(values.size()));
  return values[rank - 1];
}

std::vector<AggregateRow> aggregate(const std::vector<MetricsRecord>& records) {
  if (records.empty()) throw std::invalid_argument("aggregate: no records");
  std::map<int, std::pair<std::vector<double>, std::vector<double>>> by_size;
  std::map<int, int> failures;
  for (const auto& rec : records) {
    if (rec.status == SolveStatus::kOptimal) {
      by_size[rec.sample_size].first.push_back(rec.precision);
      by_size[rec.sample_size].second.push_back(rec.recall);
    } else {
      ++failures[rec.sample_size];
      by_size.try_emplace(rec.sample_size);
    }
  }

  std::vector<AggregateRow> rows;
  for (auto& [size, metrics] : by_size) {
    int n_fail = failures.count(size) ? failures[size] : 0;
    for (int which = 0; which < 2; ++which) {
      auto& values = which == 0 ? metrics.first : metrics.second;
      AggregateRow row;
      row.sample_size = size;
      row.metric = which == 0 ? "precision" : "recall";
      row.n_ok = static_cast<int>(values.size());
      row.n_fail = n_fail;
      if (!values.empty()) {
        double total = 0.0;
        for (double v : values) total += v;
        row.mean = total / double(values.size());
        row.q10 = nearest_rank_quantile(values, 0.10);
        row.q90 = nearest_rank_quantile(values, 0.90);
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

void write_records_csv(std::ostream& out, const std::vector<MetricsRecord>& records) {
  out << "sample_size,run,precision,recall,objective,status,wall_ms\n";
  for (const auto& r : records)
    out << r.sample_size << ',' << r.run << ',' << format_g9(r.precision) << ','
        << format_g9(r.recall) << ',' << format_g9(r.objective) << ',' << to_string(r.status)
        << ',' << format_g9(r.wall_ms) << '\n';
}

void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows) {
  out << "sample_size,metric,mean,q10,q90,n_ok,n_fail\n";
  for (const auto& r : rows)
    out << r.sample_size << ',' << r.metric << ',' << format_g9(r.mean) << ','
        << format_g9(r.q10) << ',' << format_g9(r.q90) << ',' << r.n_ok << ',' << r.n_fail
        << '\n';
}

}  // namespace maxprob
