#include "heavytail/concentration.hpp"

#include <algorithm>
#include <cmath>

namespace heavytail {
namespace {

// [x]_1 = max(1, x).
double at_least_one(double x) { return std::max(1.0, x); }

// Shared validation and prefix scan: returns (S2, M) at time t.
struct PrefixScales {
  double sigma_sq_sum = 0.0;  // S2
  double b_max = 0.0;         // max(nu, max_{i<=t} b_i)
};

PrefixScales prefix_scales(const EnvelopeInputs& inputs, std::int64_t t) {
  inputs.validate();
  if (t < 1 || static_cast<std::size_t>(t) > inputs.sigma.size()) {
    throw InvalidConfig("envelope: t out of range of the provided scales");
  }
  PrefixScales s;
  for (std::int64_t i = 0; i < t; ++i) {
    s.sigma_sq_sum += inputs.sigma[i] * inputs.sigma[i];
  }
  s.b_max = std::max(inputs.nu, inputs.b_running_max[t - 1]);
  return s;
}

}  // namespace

void EnvelopeInputs::validate() const {
  if (sigma.empty() || sigma.size() != b_running_max.size()) {
    throw InvalidConfig("EnvelopeInputs: sigma/b arrays empty or mismatched");
  }
  if (!(nu > 0.0) || !std::isfinite(nu)) {
    throw InvalidConfig("EnvelopeInputs: nu must be positive");
  }
  if (!(delta > 0.0) || !(delta <= 1.0)) {
    throw InvalidConfig("EnvelopeInputs: delta must be in (0, 1]");
  }
  double prev = 0.0;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    if (!(sigma[i] > 0.0) || !std::isfinite(sigma[i])) {
      throw InvalidConfig("EnvelopeInputs: sigma entries must be positive");
    }
    if (!(b_running_max[i] >= prev) || !std::isfinite(b_running_max[i])) {
      throw InvalidConfig("EnvelopeInputs: b_running_max must be nondecreasing");
    }
    prev = b_running_max[i];
  }
}

double scalar_envelope(const EnvelopeInputs& inputs, std::int64_t t) {
  const PrefixScales s = prefix_scales(inputs, t);
  const double d = inputs.delta;
  const double nu = inputs.nu;

  const double log_inner1 =
      std::log(at_least_one(std::sqrt(s.sigma_sq_sum / (2.0 * nu * nu))));
  const double bracket1 = log_inner1 + 2.0;
  const double term1 = 2.0 * std::sqrt(s.sigma_sq_sum *
                                       std::log((4.0 / d) * bracket1 * bracket1));

  const double bracket2 = std::log(s.b_max / nu) + 2.0;
  const double term2 =
      8.0 * s.b_max * std::log((28.0 / d) * bracket2 * bracket2);
  return term1 + term2;
}

double vector_envelope(const EnvelopeInputs& inputs, std::int64_t t) {
  const PrefixScales s = prefix_scales(inputs, t);
  const double d = inputs.delta;
  const double nu = inputs.nu;

  const double log_inner1 =
      std::log(at_least_one(std::sqrt(s.sigma_sq_sum / (nu * nu))));
  const double bracket1 = log_inner1 + 2.0;
  const double term1 = 5.0 * std::sqrt(s.sigma_sq_sum *
                                       std::log((16.0 / d) * bracket1 * bracket1));

  const double bracket2 = std::log(2.0 * s.b_max / nu) + 2.0;
  const double term2 =
      23.0 * s.b_max * std::log((224.0 / d) * bracket2 * bracket2);
  return term1 + term2;
}

double sum_squares_envelope(const EnvelopeInputs& inputs, std::int64_t t) {
  const PrefixScales s = prefix_scales(inputs, t);
  const double d = inputs.delta;
  const double nu = inputs.nu;

  const double log_inner1 =
      std::log(at_least_one(std::sqrt(s.sigma_sq_sum / (nu * nu))));
  const double bracket1 = log_inner1 + 2.0;
  const double term1 =
      3.0 * s.sigma_sq_sum * std::log((4.0 / d) * bracket1 * bracket1);

  const double bracket2 = std::log(2.0 * s.b_max / nu) + 1.0;
  const double term2 = 20.0 * s.b_max * s.b_max *
                       std::log((112.0 / d) * bracket2 * bracket2);
  return term1 + term2;
}

FixedParamBounds fixed_param_bounds(double sigma, double b, std::int64_t T,
                                    double delta) {
  if (!(sigma >= 0.0) || !(b >= 0.0) || T < 1 || !(delta > 0.0) ||
      !(delta <= 1.0)) {
    throw InvalidConfig("fixed_param_bounds: invalid parameters");
  }
  const double log_term = std::log(1.0 / delta);
  FixedParamBounds bounds;
  bounds.sum_bound =
      2.0 * b * log_term +
      sigma * std::sqrt(2.0 * static_cast<double>(T) * log_term);
  bounds.squares_bound = 1.5 * sigma * sigma * static_cast<double>(T) +
                         (5.0 / 3.0) * b * b * log_term;
  return bounds;
}

}  // namespace heavytail
