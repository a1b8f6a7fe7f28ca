// Oblivious loss streams for experiments.  Each stream pre-draws its data,
// so losses never depend on the learner's play and regret accounting can
// evaluate any comparator exactly.
//
// Kinds:
//   absolute      l_t(w) = |<a_t, w> - y_t|, features of norm G, targets
//                 centered on a configurable point along the stream
//                 direction with uniform label jitter,
//   hinge         l_t(w) = max(0, 1 - y_t <a_t, w>), labels +-1; the
//                 subgradient at the kink is 0,
//   fixed_linear  l_t(w) = <c, w> with a constant coefficient vector of
//                 norm |coefficient| <= G (optionally sign-flipped per
//                 seed).
//
// All subgradients satisfy ||dl|| <= G.  Comparators are scalars c along
// the stream's unit direction e (the point c * e).
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "heavytail/errors.hpp"

namespace heavytail {

enum class LossKind {
  kAbsoluteRegression,
  kHinge,
  kFixedLinear,
};

struct LossSpec {
  LossKind kind = LossKind::kAbsoluteRegression;
  double lipschitz = 1.0;    // G, bound on feature/coefficient norms
  std::int64_t dimension = 1;

  // absolute regression
  double target = 0.0;       // regression center along e
  double label_noise = 1.0;  // uniform jitter amplitude on y_t

  // fixed linear
  double coefficient = 1.0;  // |coefficient| <= lipschitz
  bool random_sign = false;  // re-draw the coefficient sign once per seed

  void validate() const;
};

// One realized stream (per seed): data rows plus the shared direction e.
class LossStream {
 public:
  // e must be a unit vector of spec.dimension; data is drawn from the
  // (master, seed) loss-data lanes.
  static LossStream generate(const LossSpec& spec,
                             const std::vector<double>& direction,
                             std::uint64_t master_seed, std::uint64_t seed,
                             std::int64_t rounds);

  double loss(std::int64_t t, const std::vector<double>& w) const;
  std::vector<double> subgrad(std::int64_t t,
                              const std::vector<double>& w) const;

  // Loss at the comparator point c * e; uses the cached projection <a_t, e>.
  double loss_at_scalar(std::int64_t t, double c) const;

  // Argmin over a uniform grid of the cumulative comparator loss
  // sum_t l_t(c * e); grid_points >= 2 spans the data-driven range.
  double offline_optimum_scalar(int grid_points = 201) const;

  std::int64_t rounds() const { return static_cast<std::int64_t>(rows_.size()); }
  const LossSpec& spec() const { return spec_; }
  const std::vector<double>& direction() const { return direction_; }

 private:
  struct Row {
    std::vector<double> feature;  // a_t (or the fixed coefficient)
    double target = 0.0;          // y_t (unused for fixed_linear)
    double feature_dot_e = 0.0;   // <a_t, e>
  };

  double inner(const std::vector<double>& a,
               const std::vector<double>& w) const;

  LossSpec spec_;
  std::vector<double> direction_;
  std::vector<Row> rows_;
};

std::string to_string(LossKind kind);
LossKind loss_kind_from_string(const std::string& name);  // UnknownLossSpec

}  // namespace heavytail
