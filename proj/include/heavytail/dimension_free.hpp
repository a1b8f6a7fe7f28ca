// Dimension-free reduction: a clipped 1-D magnitude learner combined with a
// unit-ball direction learner.
//
// The direction learner is follow-the-regularized-leader over the unit ball
// on the clipped gradient sum S_t = sum_{i<t} clip(g_i, tau):
//
//   v_t = argmin_{||v|| <= 1}  <S_t, v> + ||v||^2 / (2 eta)
//       = -eta S_t            when ||eta S_t|| <= 1,
//       = -S_t / ||S_t||      otherwise,
//
// with eta = 1/tau.  The reduction plays w_t = x_t * v_t where x_t comes
// from the magnitude learner; after g_t arrives, the magnitude learner is
// charged <g_t, v_t> and the direction learner receives g_t.
//
// Scale book-keeping: the scalar stream <g_t, v_t> has mean bounded by G and
// p-th central moment bounded by sigma^p + 2 G^p, so the magnitude learner
// runs with sigma_1d = (sigma^p + 2 G^p)^(1/p) and threshold
// tau_1d = T^(1/p) (sigma^p + 3 G^p)^(1/p); the direction learner clips at
// tau = T^(1/p) (sigma^p + G^p)^(1/p) built from the raw scales.
#pragma once

#include <cstdint>
#include <vector>

#include "heavytail/clipping.hpp"

namespace heavytail {

// FTRL over the unit ball with linearized losses and fixed eta.
class DirectionLearner {
 public:
  DirectionLearner(std::int64_t dimension, double tau, double eta);

  // Closed-form argmin above; the zero state plays the zero vector.
  std::vector<double> predict() const;

  // Accumulates clip(g, tau) into the gradient sum.
  void update(const std::vector<double>& g);

  std::int64_t dimension() const { return dimension_; }
  double tau() const { return tau_; }
  double eta() const { return eta_; }
  const std::vector<double>& gradient_sum() const { return gradient_sum_; }

 private:
  std::int64_t dimension_;
  double tau_;
  double eta_;
  std::vector<double> gradient_sum_;
};

struct ReductionConfig {
  double sigma = 1.0;         // p-th central moment scale of the noise
  double lipschitz = 1.0;     // G
  double moment_power = 2.0;  // p in (1, 2]
  double delta = 0.05;
  double epsilon = 1.0;
  std::int64_t horizon = 100;
  std::int64_t dimension = 1;

  void validate() const;
};

class DimensionFreeLearner {
 public:
  explicit DimensionFreeLearner(const ReductionConfig& config);

  // Emits w_t = x_t * v_t; both factors are cached for the update.
  std::vector<double> predict();

  // Feeds <g, v_t> to the magnitude learner and g to the direction learner.
  void update(const std::vector<double>& g);

  const ReductionConfig& config() const { return config_; }
  const ClippedLearner& magnitude_learner() const { return magnitude_; }
  const DirectionLearner& direction_learner() const { return direction_; }
  double last_magnitude() const { return last_magnitude_; }
  const std::vector<double>& last_direction() const { return last_direction_; }

 private:
  ReductionConfig config_;
  ClippedLearner magnitude_;
  DirectionLearner direction_;
  std::vector<double> last_direction_;
  double last_magnitude_ = 0.0;
  bool pending_ = false;
};

}  // namespace heavytail
