#include "heavytail/regularizer.hpp"

#include <cmath>
#include <limits>

#include "heavytail/logspace.hpp"

namespace heavytail {
namespace {

constexpr double kLn2 = 0.6931471805599453094172321;

// exp(ln c + (p-1) ln a - (1 - 1/p) ln S): the shared factor
// c a^(p-1) / S^(1-1/p) both branches are built from.  a = 0 yields 0 for
// p > 1 and c for p = 1 (the piece degenerates to c|w| there).
double branch_factor(double c, double p, double log_a, double log_s) {
  const double exponent =
      std::log(c) + (p > 1.0 ? (p - 1.0) * log_a : 0.0) - (1.0 - 1.0 / p) * log_s;
  return std::exp(exponent);
}

double safe_log_abs(double w) {
  const double a = std::abs(w);
  return a > 0.0 ? std::log(a) : -std::numeric_limits<double>::infinity();
}

}  // namespace

void HuberPieceParams::validate() const {
  if (!(coefficient > 0.0) || !std::isfinite(coefficient)) {
    throw InvalidConfig("HuberPieceParams: coefficient must be positive");
  }
  if (!(power >= 1.0) || !std::isfinite(power)) {
    throw InvalidConfig("HuberPieceParams: power must be >= 1");
  }
  if (!(alpha0 > 0.0) || !std::isfinite(alpha0)) {
    throw InvalidConfig("HuberPieceParams: alpha0 must be positive");
  }
}

HuberPiece::HuberPiece(const HuberPieceParams& params)
    : params_(params),
      log_power_sum_(0.0),
      last_abs_iterate_(0.0),
      rounds_seen_(0) {
  params_.validate();
  log_power_sum_ = params_.power * std::log(params_.alpha0);
}

double HuberPiece::value(double w) const {
  const double aw = std::abs(w);
  if (aw == 0.0) return 0.0;
  const double c = params_.coefficient;
  const double p = params_.power;
  if (aw <= last_abs_iterate_) {
    // c |w|^p / S^(1-1/p), factored as |w| * (c |w|^(p-1) / S^(1-1/p)).
    return aw * branch_factor(c, p, std::log(aw), log_power_sum_);
  }
  const double kink = last_abs_iterate_;
  const double factor =
      branch_factor(c, p, safe_log_abs(kink), log_power_sum_);
  return (p * aw - (p - 1.0) * kink) * factor;
}

double HuberPiece::grad(double w) const {
  const double s = sign_of(w);
  if (s == 0.0) return 0.0;
  const double aw = std::abs(w);
  const double c = params_.coefficient;
  const double p = params_.power;
  const double log_a =
      aw <= last_abs_iterate_ ? std::log(aw) : safe_log_abs(last_abs_iterate_);
  return s * p * branch_factor(c, p, log_a, log_power_sum_);
}

double HuberPiece::solve_grad(double w) const {
  const double s = sign_of(w);
  if (s == 0.0) return 0.0;
  const double c = params_.coefficient;
  const double p = params_.power;
  const double log_a = std::log(std::abs(w));
  const double log_s = log_sum_exp(p * log_a, log_power_sum_);
  return s * p * branch_factor(c, p, log_a, log_s);
}

void HuberPiece::advance(double w) {
  const double aw = std::abs(w);
  log_power_sum_ = log_sum_exp(log_power_sum_, params_.power * safe_log_abs(aw));
  last_abs_iterate_ = aw;
  ++rounds_seen_;
}

double HuberPiece::grad_bound() const {
  return params_.coefficient * params_.power;
}

double psi_value(std::span<const HuberPiece> pieces, double w) {
  double v = 0.0;
  for (const HuberPiece& piece : pieces) v += piece.value(w);
  return v;
}

double psi_grad(std::span<const HuberPiece> pieces, double w) {
  double g = 0.0;
  for (const HuberPiece& piece : pieces) g += piece.grad(w);
  return g;
}

double psi_solve_grad(std::span<const HuberPiece> pieces, double w) {
  double g = 0.0;
  for (const HuberPiece& piece : pieces) g += piece.solve_grad(w);
  return g;
}

double psi_grad_bound(std::span<const HuberPiece> pieces) {
  double h = 0.0;
  for (const HuberPiece& piece : pieces) h += piece.grad_bound();
  return h;
}

PsiConstants compute_psi_constants(double sigma, double b, double delta,
                                   double epsilon, std::int64_t horizon) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw InvalidConfig("compute_psi_constants: sigma must be positive");
  }
  if (!(b > 0.0) || !std::isfinite(b)) {
    throw InvalidConfig("compute_psi_constants: b must be positive");
  }
  if (!(delta > 0.0) || !(delta <= 1.0)) {
    throw InvalidConfig("compute_psi_constants: delta must be in (0, 1]");
  }
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw InvalidConfig("compute_psi_constants: epsilon must be positive");
  }
  if (horizon < 1) {
    throw InvalidConfig("compute_psi_constants: horizon must be >= 1");
  }

  const double T = static_cast<double>(horizon);
  PsiConstants k;

  const double bracket1 = (T + 1.0) * kLn2 + 2.0;
  k.c1 = 2.0 * sigma * std::sqrt(std::log((32.0 / delta) * bracket1 * bracket1));
  k.p1 = 2.0;

  // ln(1 + (b/sigma) 2^(T+2)) = softplus(ln(b/sigma) + (T+2) ln 2).
  const double inner = log1p_exp(std::log(b / sigma) + (T + 2.0) * kLn2);
  const double bracket2 = inner + 2.0;
  k.c2 = 32.0 * b * std::log((224.0 / delta) * bracket2 * bracket2);
  k.p2 = std::log(T);

  k.lipschitz = k.c1 * k.p1 + k.c2 * k.p2;
  k.alpha1 = epsilon / k.c1;
  k.alpha2 = epsilon * sigma / (4.0 * b * (b + k.lipschitz));
  return k;
}

void PhiParams::validate() const {
  if (!(moment_power >= 1.0) || !(moment_power <= 2.0)) {
    throw InvalidConfig("PhiParams: moment_power must lie in [1, 2]");
  }
  if (!(sigma >= 0.0) || !(lipschitz >= 0.0) || !(sigma + lipschitz > 0.0)) {
    throw InvalidConfig("PhiParams: need sigma, G >= 0 and sigma + G > 0");
  }
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw InvalidConfig("PhiParams: tau must be positive");
  }
  if (!(slope >= 0.0) || !std::isfinite(slope)) {
    throw InvalidConfig("PhiParams: slope must be nonnegative and finite");
  }
}

PhiParams make_phi_params(double moment_power, double sigma, double lipschitz,
                          double tau) {
  PhiParams phi;
  phi.moment_power = moment_power;
  phi.sigma = sigma;
  phi.lipschitz = lipschitz;
  phi.tau = tau;
  phi.slope = std::pow(2.0, moment_power - 1.0) *
              (std::pow(sigma, moment_power) + std::pow(lipschitz, moment_power)) /
              std::pow(tau, moment_power - 1.0);
  phi.validate();
  return phi;
}

double phi_value(const PhiParams& phi, double w) {
  return phi.slope * std::abs(w);
}

double phi_grad(const PhiParams& phi, double w) {
  return phi.slope * sign_of(w);
}

}  // namespace heavytail
