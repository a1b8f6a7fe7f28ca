#include "heavytail/dimension_free.hpp"

#include <cmath>

namespace heavytail {
namespace {

double norm(const std::vector<double>& v) {
  double sq = 0.0;
  for (double x : v) sq += x * x;
  return std::sqrt(sq);
}

const ReductionConfig& validated(const ReductionConfig& config) {
  config.validate();
  return config;
}

ClippedConfig magnitude_config(const ReductionConfig& config) {
  const double p = config.moment_power;
  const double sigma_p = std::pow(config.sigma, p);
  const double g_p = std::pow(config.lipschitz, p);
  ClippedConfig inner;
  inner.sigma = std::pow(sigma_p + 2.0 * g_p, 1.0 / p);
  inner.lipschitz = config.lipschitz;
  inner.moment_power = p;
  inner.delta = config.delta;
  inner.epsilon = config.epsilon;
  inner.horizon = config.horizon;
  inner.tau = std::pow(static_cast<double>(config.horizon), 1.0 / p) *
              std::pow(sigma_p + 3.0 * g_p, 1.0 / p);
  return inner;
}

}  // namespace

DirectionLearner::DirectionLearner(std::int64_t dimension, double tau,
                                   double eta)
    : dimension_(dimension),
      tau_(tau),
      eta_(eta),
      gradient_sum_(static_cast<std::size_t>(dimension), 0.0) {
  if (dimension < 1) {
    throw InvalidConfig("DirectionLearner: dimension must be >= 1");
  }
  if (!(tau > 0.0) || !(eta > 0.0)) {
    throw InvalidConfig("DirectionLearner: tau and eta must be positive");
  }
}

std::vector<double> DirectionLearner::predict() const {
  std::vector<double> v(gradient_sum_.size(), 0.0);
  const double sum_norm = norm(gradient_sum_);
  if (sum_norm == 0.0) return v;
  // Unconstrained minimizer -eta S, projected to the ball boundary when it
  // leaves the ball.
  const double scale =
      eta_ * sum_norm <= 1.0 ? -eta_ : -1.0 / sum_norm;
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = scale * gradient_sum_[i];
  return v;
}

void DirectionLearner::update(const std::vector<double>& g) {
  if (g.size() != gradient_sum_.size()) {
    throw DimensionMismatch("DirectionLearner: gradient dimension mismatch");
  }
  const std::vector<double> clipped = clip(g, tau_);
  for (std::size_t i = 0; i < clipped.size(); ++i) {
    gradient_sum_[i] += clipped[i];
  }
}

void ReductionConfig::validate() const {
  if (!(moment_power > 1.0) || !(moment_power <= 2.0)) {
    throw InvalidConfig("ReductionConfig: moment_power must be in (1, 2]");
  }
  if (!(sigma > 0.0) || !(lipschitz >= 0.0)) {
    throw InvalidConfig("ReductionConfig: need sigma > 0 and G >= 0");
  }
  if (!(delta > 0.0) || !(delta <= 1.0)) {
    throw InvalidConfig("ReductionConfig: delta must be in (0, 1]");
  }
  if (!(epsilon > 0.0)) {
    throw InvalidConfig("ReductionConfig: epsilon must be positive");
  }
  if (horizon < 3) {
    throw InvalidConfig("ReductionConfig: horizon must be >= 3");
  }
  if (dimension < 1) {
    throw InvalidConfig("ReductionConfig: dimension must be >= 1");
  }
}

DimensionFreeLearner::DimensionFreeLearner(const ReductionConfig& config)
    : config_(validated(config)),
      magnitude_(magnitude_config(config)),
      direction_(config.dimension,
                 default_clip_threshold(config.moment_power, config.sigma,
                                        config.lipschitz, config.horizon),
                 1.0 / default_clip_threshold(config.moment_power, config.sigma,
                                              config.lipschitz,
                                              config.horizon)),
      last_direction_(static_cast<std::size_t>(config.dimension), 0.0) {}

std::vector<double> DimensionFreeLearner::predict() {
  last_magnitude_ = magnitude_.predict();
  last_direction_ = direction_.predict();
  pending_ = true;
  std::vector<double> w(last_direction_.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] = last_magnitude_ * last_direction_[i];
  }
  return w;
}

void DimensionFreeLearner::update(const std::vector<double>& g) {
  if (g.size() != last_direction_.size()) {
    throw DimensionMismatch("DimensionFreeLearner: gradient dimension mismatch");
  }
  if (!pending_) {
    throw Error("DimensionFreeLearner: update() requires predict() first");
  }
  double inner = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    inner += g[i] * last_direction_[i];
  }
  magnitude_.update(inner);
  direction_.update(g);
  pending_ = false;
}

}  // namespace heavytail
