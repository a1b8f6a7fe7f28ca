#include "heavytail/base_olo.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace heavytail {
namespace {

// ONS step size 2 / (2 - ln 3) for the exp-concave betting surrogate.
constexpr double kOnsStep = 2.0 / (2.0 - 1.0986122886681098);

// Clamps |cost| to `bound`, throwing beyond the relative slack.
double clamp_cost(double cost, double bound, const char* who) {
  if (!(std::abs(cost) <= bound * (1.0 + kCostSlack))) {
    throw CostOutOfRange(std::string(who) + ": cost " + std::to_string(cost) +
                         " exceeds bound " + std::to_string(bound));
  }
  return std::clamp(cost, -bound, bound);
}

}  // namespace

BaseLearner::BaseLearner(double epsilon, Domain domain)
    : epsilon_(epsilon),
      domain_(domain),
      wealth_(epsilon),
      betting_fraction_(0.0),
      ons_denominator_(1.0),
      rounds_seen_(0) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw InvalidConfig("BaseLearner: epsilon must be positive and finite");
  }
}

void BaseLearner::update(double cost) {
  const double c = clamp_cost(cost, 1.0, "BaseLearner");

  // Charge the bet placed this round.  |c * beta| <= 1/2 keeps wealth > 0.
  wealth_ *= 1.0 - c * betting_fraction_;

  // ONS on beta with surrogate loss -ln(1 - c beta).
  const double z = c / (1.0 - c * betting_fraction_);
  ons_denominator_ += z * z;
  const double lo = (domain_ == Domain::kNonnegativeHalfLine) ? 0.0 : -0.5;
  betting_fraction_ = std::clamp(
      betting_fraction_ - kOnsStep * z / ons_denominator_, lo, 0.5);
  ++rounds_seen_;
}

void RescaleWrapper::validate() const {
  const double f[4] = {inner_lipschitz, outer_lipschitz, inner_epsilon,
                       outer_epsilon};
  for (double v : f) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw InvalidConfig("RescaleWrapper: scale factors must be positive");
    }
  }
}

RescaledLearner::RescaledLearner(const RescaleWrapper& scales, Domain domain)
    : scales_(scales), inner_(scales.inner_epsilon, domain) {
  scales_.validate();
  if (scales_.inner_lipschitz != 1.0) {
    throw InvalidConfig(
        "RescaledLearner: inner learner has unit cost bound; "
        "set inner_lipschitz = 1");
  }
}

void RescaledLearner::update(double outer_cost) {
  const double c =
      clamp_cost(outer_cost, scales_.outer_lipschitz, "RescaledLearner");
  inner_.update(c * scales_.cost_scale());
}

}  // namespace heavytail
