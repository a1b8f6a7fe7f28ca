// Optimistic composite learner for sub-exponential gradient noise.
//
// Two rescaled coin-betting learners are combined through the two-piece
// Huber regularizer psi_t:
//   - A1 (full line, outer cost bound b + H) proposes the center x_t,
//   - A2 (nonnegative half line, outer cost bound H(b+H)) proposes the
//     regularization weight y_t >= 0,
// and the played iterate solves the fixed point
//   w_t = x_t - y_t * grad psi_t(w_t),
// where the round-t gradient uses the prior-round power sums plus the
// candidate |w|^p in each denominator.  h(w) = w - x_t + y_t grad psi_t(w)
// is strictly increasing with a root inside (x_t - y_t H, x_t] for x_t >= 0
// (mirrored for x_t < 0), so the solve is a certified bisection.
//
// After the cost g_t arrives, w_t is inserted into the power sums, psi's
// gradient is re-evaluated at w_t (identical value by construction), and the
// two learners are charged g_t + grad psi_t(w_t) and
// -(g_t + grad psi_t(w_t)) * grad psi_t(w_t) respectively.
#pragma once

#include <cstdint>
#include <span>

#include "heavytail/base_olo.hpp"
#include "heavytail/regularizer.hpp"

namespace heavytail {

struct CompositeConfig {
  double sigma = 1.0;    // sub-exponential noise scale
  double b = 1.0;        // hard bound on |g_t|
  double delta = 0.05;   // confidence level
  double epsilon = 1.0;  // initial wealth / regret at the origin
  std::int64_t horizon = 100;  // T; must be >= 3 so that p2 = ln T >= 1

  // Fixed-point solve: |h(w)| <= solver_tol * (1 + |x_t|) certifies the
  // returned iterate; the bracket is inflated by the same scaled amount
  // before the straddle check.
  double solver_tol = 1e-12;
  int max_solver_iterations = 200;

  void validate() const;
};

// Diagnostics for the most recent fixed-point solve.
struct SolveInfo {
  double x = 0.0;         // center proposed by A1
  double y = 0.0;         // weight proposed by A2 (>= 0)
  double iterate = 0.0;   // solved w_t
  double residual = 0.0;  // |h(w_t)|
  int iterations = 0;
};

class CompositeLearner {
 public:
  explicit CompositeLearner(const CompositeConfig& config);

  // Solves the round's fixed point and returns w_t.  Caches the iterate;
  // call update() exactly once before the next predict().
  double predict();

  // Consumes the round's cost g with |g| <= b (within kCostSlack).
  void update(double g);

  const CompositeConfig& config() const { return config_; }
  const PsiConstants& constants() const { return constants_; }
  double lipschitz() const { return constants_.lipschitz; }  // H
  const SolveInfo& last_solve() const { return last_solve_; }
  std::span<const HuberPiece> pieces() const {
    return std::span<const HuberPiece>(pieces_, 2);
  }
  const RescaledLearner& center_learner() const { return center_; }
  const RescaledLearner& weight_learner() const { return weight_; }
  std::int64_t rounds_seen() const { return rounds_seen_; }

 private:
  double solve_fixed_point(double x, double y);

  CompositeConfig config_;
  PsiConstants constants_;
  RescaledLearner center_;  // A1
  RescaledLearner weight_;  // A2
  HuberPiece pieces_[2];
  SolveInfo last_solve_;
  bool pending_ = false;
  std::int64_t rounds_seen_ = 0;
};

// Fully explicit high-probability regret envelope of the composite learner
// at comparator u for confidence delta: holds with probability >= 1 - delta
// over streams whose conditional noise is (sigma, b) sub-exponential.  Uses
// the measured base-learner constants from base_olo.hpp.
double composite_regret_bound_rhs(const CompositeConfig& config, double delta,
                                  double u);

}  // namespace heavytail
