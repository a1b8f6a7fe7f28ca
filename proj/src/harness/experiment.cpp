#include "heavytail/harness/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <limits>
#include <memory>
#include <mutex>
#include <thread>

#include "heavytail/clipping.hpp"
#include "heavytail/composite.hpp"
#include "heavytail/dimension_free.hpp"
#include "heavytail/rng.hpp"

namespace heavytail {
namespace {

// Fixed comparator direction: +1 in one dimension, otherwise a unit vector
// drawn once from the master stream so all seeds share it.
std::vector<double> comparator_direction(const ExperimentConfig& config) {
  const std::int64_t d = config.learner.dimension;
  std::vector<double> e(static_cast<std::size_t>(d), 0.0);
  if (d == 1) {
    e[0] = 1.0;
    return e;
  }
  CounterRng rng(config.run.master_seed, 0, 0, RngLane::kDirection);
  double norm_sq = 0.0;
  do {
    norm_sq = 0.0;
    for (double& x : e) {
      x = rng.normal();
      norm_sq += x * x;
    }
  } while (norm_sq == 0.0);
  const double inv = 1.0 / std::sqrt(norm_sq);
  for (double& x : e) x *= inv;
  return e;
}

std::string format_comparator_label(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "u=%g", value);
  return buf;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const std::vector<double>& v) {
  return std::sqrt(dot(v, v));
}

// Validates config/noise/loss consistency beyond per-struct checks.
void cross_validate(const ExperimentConfig& config, const NoiseModel& noise) {
  if (config.loss.lipschitz > config.learner.lipschitz * (1.0 + 1e-12)) {
    throw InvalidConfig(
        "run_experiment: loss Lipschitz bound exceeds the learner's G");
  }
  if (config.learner.algorithm == Algorithm::kSubExp1D) {
    if (!noise.bounded()) {
      throw InvalidConfig(
          "run_experiment: sub_exp_1d requires bounded noise (bounded_uniform "
          "or none)");
    }
    if (config.learner.lipschitz + noise.bound() >
        config.learner.b * (1.0 + 1e-12)) {
      throw InvalidConfig(
          "run_experiment: sub_exp_1d needs G + noise bound <= b");
    }
  }
}

// The composite-stage parameters a given learner config actually runs
// with, used to evaluate the regret envelope in the summary.
CompositeConfig effective_composite_config(const ExperimentConfig& config) {
  switch (config.learner.algorithm) {
    case Algorithm::kSubExp1D: {
      CompositeConfig c;
      c.sigma = config.learner.sigma;
      c.b = config.learner.b;
      c.delta = config.learner.delta;
      c.epsilon = config.learner.epsilon;
      c.horizon = config.learner.horizon;
      return c;
    }
    case Algorithm::kHeavyTail1D: {
      ClippedConfig c;
      c.sigma = config.learner.sigma;
      c.lipschitz = config.learner.lipschitz;
      c.moment_power = config.learner.moment_power;
      c.delta = config.learner.delta;
      c.epsilon = config.learner.epsilon;
      c.horizon = config.learner.horizon;
      c.tau = config.learner.tau;
      return ClippedLearner(c).inner().config();
    }
    case Algorithm::kDimensionFree:
    default: {
      ReductionConfig c;
      c.sigma = config.learner.sigma;
      c.lipschitz = config.learner.lipschitz;
      c.moment_power = config.learner.moment_power;
      c.delta = config.learner.delta;
      c.epsilon = config.learner.epsilon;
      c.horizon = config.learner.horizon;
      c.dimension = config.learner.dimension;
      return DimensionFreeLearner(c).magnitude_learner().inner().config();
    }
  }
}

// Uniform learner interface over the three algorithms.
class AnyLearner {
 public:
  explicit AnyLearner(const LearnerConfig& config) : config_(config) {
    switch (config.algorithm) {
      case Algorithm::kSubExp1D: {
        CompositeConfig c;
        c.sigma = config.sigma;
        c.b = config.b;
        c.delta = config.delta;
        c.epsilon = config.epsilon;
        c.horizon = config.horizon;
        composite_ = std::make_unique<CompositeLearner>(c);
        break;
      }
      case Algorithm::kHeavyTail1D: {
        ClippedConfig c;
        c.sigma = config.sigma;
        c.lipschitz = config.lipschitz;
        c.moment_power = config.moment_power;
        c.delta = config.delta;
        c.epsilon = config.epsilon;
        c.horizon = config.horizon;
        c.tau = config.tau;
        clipped_ = std::make_unique<ClippedLearner>(c);
        break;
      }
      case Algorithm::kDimensionFree: {
        ReductionConfig c;
        c.sigma = config.sigma;
        c.lipschitz = config.lipschitz;
        c.moment_power = config.moment_power;
        c.delta = config.delta;
        c.epsilon = config.epsilon;
        c.horizon = config.horizon;
        c.dimension = config.dimension;
        reduction_ = std::make_unique<DimensionFreeLearner>(c);
        break;
      }
    }
  }

  std::vector<double> predict() {
    if (composite_) return {composite_->predict()};
    if (clipped_) return {clipped_->predict()};
    return reduction_->predict();
  }

  // Returns whether the cost was truncated.
  bool update(const std::vector<double>& g) {
    if (composite_) {
      composite_->update(g[0]);
      return false;
    }
    if (clipped_) {
      clipped_->update(g[0]);
      return clipped_->last_update_clipped();
    }
    const double tau = reduction_->direction_learner().tau();
    reduction_->update(g);
    return norm(g) > tau;
  }

 private:
  LearnerConfig config_;
  std::unique_ptr<CompositeLearner> composite_;
  std::unique_ptr<ClippedLearner> clipped_;
  std::unique_ptr<DimensionFreeLearner> reduction_;
};

RegretTrace run_one_seed(const ExperimentConfig& config,
                         const std::vector<Comparator>& comparators,
                         const std::vector<double>& direction,
                         const NoiseModel& noise, std::uint64_t hash,
                         std::int64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  const std::int64_t T = config.learner.horizon;
  const std::int64_t d = config.learner.dimension;

  LossStream stream =
      LossStream::generate(config.loss, direction, config.run.master_seed,
                           static_cast<std::uint64_t>(seed), T);

  // Resolve data-driven comparators against this seed's stream.
  std::vector<double> u_values(comparators.size(), 0.0);
  for (std::size_t j = 0; j < comparators.size(); ++j) {
    u_values[j] = std::isnan(comparators[j].value)
                      ? stream.offline_optimum_scalar()
                      : comparators[j].value;
  }

  RegretTrace trace;
  trace.seed = seed;
  trace.config_hash = hash;
  trace.rows.resize(static_cast<std::size_t>(T));

  AnyLearner learner(config.learner);
  std::vector<double> cumulative(comparators.size(), 0.0);

  for (std::int64_t t = 1; t <= T; ++t) {
    const std::vector<double> w = learner.predict();
    const double loss_w = stream.loss(t, w);
    std::vector<double> g = stream.subgrad(t, w);

    CounterRng rng(config.run.master_seed, static_cast<std::uint64_t>(seed),
                   static_cast<std::uint64_t>(t), RngLane::kNoise);
    const std::vector<double> eta = noise.sample_vector(rng, d);
    for (std::int64_t i = 0; i < d; ++i) {
      g[static_cast<std::size_t>(i)] += eta[static_cast<std::size_t>(i)];
    }

    TraceRow& row = trace.rows[static_cast<std::size_t>(t - 1)];
    row.round = t;
    row.iterate_norm = norm(w);
    row.loss = loss_w;
    row.grad_norm = norm(g);
    row.clipped = learner.update(g);
    row.regret.resize(comparators.size());
    for (std::size_t j = 0; j < comparators.size(); ++j) {
      cumulative[j] += loss_w - stream.loss_at_scalar(t, u_values[j]);
      row.regret[j] = cumulative[j];
    }
  }

  trace.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return trace;
}

double quantile(std::vector<double> sorted_values, double q) {
  if (sorted_values.empty()) return 0.0;
  const double pos = q * (static_cast<double>(sorted_values.size()) - 1.0);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted_values.size() - 1);
  const double frac = pos - std::floor(pos);
  return sorted_values[lo] * (1.0 - frac) + sorted_values[hi] * frac;
}

}  // namespace

std::vector<Comparator> default_comparators() {
  std::vector<Comparator> grid;
  grid.push_back({"u=0", 0.0});
  for (double mag : {0.1, 1.0, 10.0}) {
    grid.push_back({format_comparator_label(mag), mag});
    grid.push_back({format_comparator_label(-mag), -mag});
  }
  return grid;
}

int thread_budget() {
  if (const char* env = std::getenv("HEAVYTAIL_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

std::uint64_t config_hash(const ExperimentConfig& config) {
  const std::string text = canonical_config_text(config);
  std::uint64_t h = 0xCBF29CE484222325ull;  // FNV-1a 64
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

ExperimentResult run_experiment(const ExperimentConfig& config,
                                std::int64_t num_seeds) {
  config.learner.validate();
  config.loss.validate();
  if (num_seeds < 1) {
    throw InvalidConfig("run_experiment: num_seeds must be >= 1");
  }
  const NoiseModel noise = NoiseModel::make(config.noise);
  cross_validate(config, noise);

  ExperimentResult result;
  result.master_seed = config.run.master_seed;
  result.config_hash = config_hash(config);

  // Comparator grid: explicit values, or the default; regression streams
  // get the offline optimum appended (value = NaN, resolved per seed).
  if (config.run.comparators.empty()) {
    result.comparators = default_comparators();
  } else {
    for (double v : config.run.comparators) {
      result.comparators.push_back({format_comparator_label(v), v});
    }
  }
  if (config.run.include_offline_optimum &&
      config.loss.kind == LossKind::kAbsoluteRegression) {
    result.comparators.push_back(
        {"u=opt", std::numeric_limits<double>::quiet_NaN()});
  }

  const std::vector<double> direction = comparator_direction(config);
  result.traces.resize(static_cast<std::size_t>(num_seeds));

  const int workers =
      std::min<std::int64_t>(thread_budget(), num_seeds);
  std::atomic<std::int64_t> next_seed{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;

  auto work = [&]() {
    while (true) {
      const std::int64_t seed = next_seed.fetch_add(1);
      if (seed >= num_seeds) break;
      try {
        result.traces[static_cast<std::size_t>(seed)] =
            run_one_seed(config, result.comparators, direction, noise,
                         result.config_hash, seed);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        next_seed.store(num_seeds);  // stop remaining work
        break;
      }
    }
  };

  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int i = 0; i < workers; ++i) pool.emplace_back(work);
    for (std::thread& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  // The envelope is the bound of the composite stage the learner actually
  // runs (for clipped learners: on truncated costs, so it omits the
  // clipping-bias contribution; coverage is a diagnostic, not a proof).
  const CompositeConfig envelope_config = effective_composite_config(config);

  // Final-regret order statistics per comparator.
  result.summary.seeds = num_seeds;
  result.summary.rounds = config.learner.horizon;
  for (std::size_t j = 0; j < result.comparators.size(); ++j) {
    std::vector<double> finals;
    finals.reserve(result.traces.size());
    for (const RegretTrace& trace : result.traces) {
      finals.push_back(trace.rows.back().regret[j]);
    }
    std::sort(finals.begin(), finals.end());
    ComparatorSummary s;
    s.label = result.comparators[j].label;
    s.value = result.comparators[j].value;
    s.median = quantile(finals, 0.5);
    s.quantile_high = quantile(finals, 1.0 - config.learner.delta);
    s.max = finals.back();
    if (std::isnan(s.value)) {
      // Data-driven comparator: the fixed-u envelope does not apply.
      s.envelope = std::numeric_limits<double>::quiet_NaN();
      s.coverage = std::numeric_limits<double>::quiet_NaN();
    } else {
      s.envelope = composite_regret_bound_rhs(envelope_config,
                                              config.learner.delta,
                                              std::abs(s.value));
      std::int64_t covered = 0;
      for (double r : finals) covered += (r <= s.envelope) ? 1 : 0;
      s.coverage =
          static_cast<double>(covered) / static_cast<double>(finals.size());
    }
    result.summary.comparators.push_back(std::move(s));
  }
  return result;
}

}  // namespace heavytail
