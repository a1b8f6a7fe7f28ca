// Gradient clipping for heavy-tailed noise, and the clipped 1-D learner.
//
// Gradients whose p-th central moment is bounded (1 < p <= 2) are truncated
// to norm tau.  Truncation introduces bias but caps the second moment:
//
//   || E[clip(g)] - E[g] ||  <=  2^(p-1) (sigma^p + G^p) / tau^(p-1),
//   E || clip(g) ||^2        <=  2^(p-1) tau^(2-p) (sigma^p + G^p),
//
// so the clipped stream is (sqrt(2^(p-1) tau^(2-p) (sigma^p + G^p)), tau)
// sub-exponential up to the bias, which the linear penalty phi compensates.
// The learner feeds clip(g_t, tau) + grad phi(w_t) into a composite learner
// whose noise scale is the moment bound above and whose hard cost bound is
// tau + slope(phi).
#pragma once

#include <cstdint>
#include <vector>

#include "heavytail/composite.hpp"
#include "heavytail/regularizer.hpp"

namespace heavytail {

// min(1, tau / ||g||) * g; the zero vector is returned unchanged.
double clip(double g, double tau);
std::vector<double> clip(const std::vector<double>& g, double tau);

struct ClippedMomentBounds {
  double bias = 0.0;           // bound on the clipping bias norm
  double second_moment = 0.0;  // bound on E ||clip(g)||^2
};

// Closed-form moment bounds for clipping at tau under E||g - Eg||^p <=
// sigma^p and ||Eg|| <= G, for p in (1, 2].
ClippedMomentBounds clipped_moment_bounds(double moment_power, double sigma,
                                          double lipschitz, double tau);

// Default threshold tau = T^(1/p) (sigma^p + G^p)^(1/p).
double default_clip_threshold(double moment_power, double sigma,
                              double lipschitz, std::int64_t horizon);

struct ClippedConfig {
  double sigma = 1.0;          // p-th central moment scale of the raw noise
  double lipschitz = 1.0;      // G, bound on the mean gradient norm
  double moment_power = 2.0;   // p in (1, 2]
  double delta = 0.05;
  double epsilon = 1.0;
  std::int64_t horizon = 100;  // T >= 3
  double tau = 0.0;            // 0 selects the default threshold

  void validate() const;
};

// One-dimensional parameter-free learner for heavy-tailed costs.
class ClippedLearner {
 public:
  explicit ClippedLearner(const ClippedConfig& config);

  double predict();

  // Accepts an unbounded raw cost; clips, adds the bias penalty gradient at
  // the pending iterate, and forwards to the composite learner.
  void update(double g);

  double tau() const { return tau_; }
  const PhiParams& phi() const { return phi_; }
  const ClippedConfig& config() const { return config_; }
  const CompositeLearner& inner() const { return inner_; }
  // Whether the most recent update() had to truncate its cost.
  bool last_update_clipped() const { return last_update_clipped_; }

 private:
  static CompositeConfig inner_config(const ClippedConfig& config, double tau,
                                      double phi_slope);

  ClippedConfig config_;
  double tau_;
  PhiParams phi_;
  CompositeLearner inner_;
  bool last_update_clipped_ = false;
};

}  // namespace heavytail
