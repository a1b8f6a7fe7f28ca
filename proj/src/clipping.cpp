#include "heavytail/clipping.hpp"

#include <cmath>

namespace heavytail {
namespace {

const ClippedConfig& validated(const ClippedConfig& config) {
  config.validate();
  return config;
}

}  // namespace

double clip(double g, double tau) {
  const double norm = std::abs(g);
  if (norm <= tau || norm == 0.0) return g;
  return g * (tau / norm);
}

std::vector<double> clip(const std::vector<double>& g, double tau) {
  double sq = 0.0;
  for (double v : g) sq += v * v;
  const double norm = std::sqrt(sq);
  if (norm <= tau || norm == 0.0) return g;
  std::vector<double> out(g.size());
  const double scale = tau / norm;
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = g[i] * scale;
  return out;
}

ClippedMomentBounds clipped_moment_bounds(double moment_power, double sigma,
                                          double lipschitz, double tau) {
  if (!(moment_power > 1.0) || !(moment_power <= 2.0)) {
    throw InvalidConfig("clipped_moment_bounds: moment_power must be in (1, 2]");
  }
  if (!(sigma >= 0.0) || !(lipschitz >= 0.0) || !(tau > 0.0)) {
    throw InvalidConfig("clipped_moment_bounds: need sigma, G >= 0 and tau > 0");
  }
  const double p = moment_power;
  const double mass =
      std::pow(2.0, p - 1.0) * (std::pow(sigma, p) + std::pow(lipschitz, p));
  ClippedMomentBounds bounds;
  bounds.bias = mass / std::pow(tau, p - 1.0);
  bounds.second_moment = mass * std::pow(tau, 2.0 - p);
  return bounds;
}

double default_clip_threshold(double moment_power, double sigma,
                              double lipschitz, std::int64_t horizon) {
  if (horizon < 1) {
    throw InvalidConfig("default_clip_threshold: horizon must be >= 1");
  }
  const double p = moment_power;
  return std::pow(static_cast<double>(horizon), 1.0 / p) *
         std::pow(std::pow(sigma, p) + std::pow(lipschitz, p), 1.0 / p);
}

void ClippedConfig::validate() const {
  if (!(moment_power > 1.0) || !(moment_power <= 2.0)) {
    throw InvalidConfig("ClippedConfig: moment_power must be in (1, 2]");
  }
  if (!(sigma > 0.0) || !(lipschitz >= 0.0)) {
    throw InvalidConfig("ClippedConfig: need sigma > 0 and G >= 0");
  }
  if (!(delta > 0.0) || !(delta <= 1.0)) {
    throw InvalidConfig("ClippedConfig: delta must be in (0, 1]");
  }
  if (!(epsilon > 0.0)) {
    throw InvalidConfig("ClippedConfig: epsilon must be positive");
  }
  if (horizon < 3) {
    throw InvalidConfig("ClippedConfig: horizon must be >= 3");
  }
  if (!(tau >= 0.0) || !std::isfinite(tau)) {
    throw InvalidConfig("ClippedConfig: tau must be finite and >= 0");
  }
}

CompositeConfig ClippedLearner::inner_config(const ClippedConfig& config,
                                             double tau, double phi_slope) {
  const ClippedMomentBounds bounds = clipped_moment_bounds(
      config.moment_power, config.sigma, config.lipschitz, tau);
  CompositeConfig inner;
  inner.sigma = std::sqrt(bounds.second_moment);
  inner.b = tau + phi_slope;  // forwarded costs satisfy this bound exactly
  inner.delta = config.delta;
  inner.epsilon = config.epsilon;
  inner.horizon = config.horizon;
  return inner;
}

ClippedLearner::ClippedLearner(const ClippedConfig& config)
    : config_(validated(config)),
      tau_(config.tau > 0.0
               ? config.tau
               : default_clip_threshold(config.moment_power, config.sigma,
                                        config.lipschitz, config.horizon)),
      phi_(make_phi_params(config.moment_power, config.sigma, config.lipschitz,
                           tau_)),
      inner_(inner_config(config_, tau_, phi_.slope)) {}

double ClippedLearner::predict() { return inner_.predict(); }

void ClippedLearner::update(double g) {
  const double w = inner_.predict();  // pending iterate of this round
  const double clipped = clip(g, tau_);
  last_update_clipped_ = clipped != g;
  inner_.update(clipped + phi_grad(phi_, w));
}

}  // namespace heavytail
