// Multi-seed experiment runner with exact regret accounting.
//
// Each seed runs the configured learner against an oblivious stream: data
// and gradient noise come from counter-based generators keyed by (master
// seed, seed index, round, lane), so traces are reproducible independent of
// scheduling.  Seeds run in parallel, capped by HEAVYTAIL_THREADS.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "heavytail/harness/config.hpp"

namespace heavytail {

// One comparator point: a scalar along the stream direction.
struct Comparator {
  std::string label;  // e.g. "u=0.1" or "u=opt"
  double value = 0.0;
};

struct TraceRow {
  std::int64_t round = 0;       // t, 1-based
  double iterate_norm = 0.0;    // ||w_t||
  double loss = 0.0;            // l_t(w_t)
  double grad_norm = 0.0;       // raw (pre-clip) gradient norm
  bool clipped = false;         // whether the learner truncated this cost
  std::vector<double> regret;   // cumulative regret per comparator
};

struct RegretTrace {
  std::int64_t seed = 0;
  std::uint64_t config_hash = 0;
  double wall_time_seconds = 0.0;  // in-memory only; never emitted
  std::vector<TraceRow> rows;
};

// Final-regret order statistics per comparator, plus the theoretical
// envelope of the learner's inner composite stage at |u| and the fraction
// of seeds whose final regret stayed under it.
struct ComparatorSummary {
  std::string label;
  double value = 0.0;          // NaN for data-driven comparators (u=opt)
  double median = 0.0;
  double quantile_high = 0.0;  // empirical (1 - delta) quantile
  double max = 0.0;
  double envelope = 0.0;       // composite_regret_bound_rhs at |value|
  double coverage = 0.0;       // fraction of seeds with regret <= envelope
};

struct ExperimentSummary {
  std::vector<ComparatorSummary> comparators;
  std::int64_t seeds = 0;
  std::int64_t rounds = 0;
};

struct ExperimentResult {
  std::vector<Comparator> comparators;  // labels match regret column order
  std::vector<RegretTrace> traces;      // one per seed, in seed order
  ExperimentSummary summary;
  std::uint64_t config_hash = 0;
  std::uint64_t master_seed = 0;
};

// Default comparator grid {0, +-0.1, +-1, +-10}; regression streams also
// append the per-seed offline optimum ("u=opt") when requested.
std::vector<Comparator> default_comparators();

// Runs `num_seeds` seeds (indices 0..n-1).  Throws InvalidConfig when the
// config is inconsistent with the noise model (e.g. sub_exp_1d with
// unbounded noise or G + noise bound > b, loss G exceeding learner G).
ExperimentResult run_experiment(const ExperimentConfig& config,
                                std::int64_t num_seeds);

// Worker cap from HEAVYTAIL_THREADS (falls back to hardware concurrency).
int thread_budget();

// FNV-1a 64-bit hash of the canonical config text.
std::uint64_t config_hash(const ExperimentConfig& config);

}  // namespace heavytail
