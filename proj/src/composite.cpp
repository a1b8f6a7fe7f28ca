#include "heavytail/composite.hpp"

#include <algorithm>
#include <cmath>

#include "heavytail/logspace.hpp"

namespace heavytail {
namespace {

// Builds the two Huber pieces from the derived constants.
HuberPieceParams piece_params(double c, double p, double alpha) {
  HuberPieceParams params;
  params.coefficient = c;
  params.power = p;
  params.alpha0 = alpha;
  return params;
}

RescaleWrapper wrapper_for(double outer_bound, double epsilon) {
  RescaleWrapper scales;
  scales.inner_lipschitz = 1.0;
  scales.outer_lipschitz = outer_bound;
  scales.inner_epsilon = epsilon;
  scales.outer_epsilon = epsilon;
  return scales;
}

const CompositeConfig& validated(const CompositeConfig& config) {
  config.validate();
  return config;
}

}  // namespace

void CompositeConfig::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw InvalidConfig("CompositeConfig: sigma must be positive");
  }
  if (!(b > 0.0) || !std::isfinite(b)) {
    throw InvalidConfig("CompositeConfig: b must be positive");
  }
  if (!(delta > 0.0) || !(delta <= 1.0)) {
    throw InvalidConfig("CompositeConfig: delta must be in (0, 1]");
  }
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw InvalidConfig("CompositeConfig: epsilon must be positive");
  }
  if (horizon < 3) {
    throw InvalidConfig(
        "CompositeConfig: horizon must be >= 3 (p2 = ln T >= 1)");
  }
  if (!(solver_tol > 0.0) || max_solver_iterations < 1) {
    throw InvalidConfig("CompositeConfig: bad solver settings");
  }
}

CompositeLearner::CompositeLearner(const CompositeConfig& config)
    : config_(validated(config)),
      constants_(compute_psi_constants(config.sigma, config.b, config.delta,
                                       config.epsilon, config.horizon)),
      center_(wrapper_for(config.b + constants_.lipschitz, config.epsilon),
              Domain::kFullLine),
      weight_(wrapper_for(constants_.lipschitz *
                              (config.b + constants_.lipschitz),
                          config.epsilon),
              Domain::kNonnegativeHalfLine),
      pieces_{HuberPiece(piece_params(constants_.c1, constants_.p1,
                                      constants_.alpha1)),
              HuberPiece(piece_params(constants_.c2, constants_.p2,
                                      constants_.alpha2))} {}

double CompositeLearner::predict() {
  if (pending_) return last_solve_.iterate;
  const double x = center_.predict();
  const double y = weight_.predict();
  const double w = solve_fixed_point(x, y);
  pending_ = true;
  return w;
}

double CompositeLearner::solve_fixed_point(double x, double y) {
  last_solve_ = SolveInfo{};
  last_solve_.x = x;
  last_solve_.y = y;

  const double tol = config_.solver_tol * (1.0 + std::abs(x));
  auto h = [&](double w) {
    return w - x + y * psi_solve_grad(pieces(), w);
  };

  // Degenerate rounds have exact solutions.
  if (y == 0.0 || x == 0.0) {
    last_solve_.iterate = x;
    last_solve_.residual = 0.0;
    return x;
  }

  // The root shares x's sign and lies between 0 and x: |w*| <= |x| because
  // grad psi opposes w, and w* cannot cross 0 since h(0) = -x.  Still, keep
  // the certified bracket endpoints from the shift bound y * H.
  const double H = constants_.lipschitz;
  double lo, hi;
  if (x > 0.0) {
    lo = std::max(0.0, x - y * H);
    hi = x;
  } else {
    lo = x;
    hi = std::min(0.0, x + y * H);
  }
  double h_lo = h(lo);
  double h_hi = h(hi);
  if (h_lo > tol || h_hi < -tol) {
    throw SolverDiverged("CompositeLearner: bracket endpoints do not straddle");
  }
  if (h_lo >= 0.0) {  // root pinned at the lower endpoint within tolerance
    last_solve_.iterate = lo;
    last_solve_.residual = std::abs(h_lo);
    return lo;
  }
  if (h_hi <= 0.0) {
    last_solve_.iterate = hi;
    last_solve_.residual = std::abs(h_hi);
    return hi;
  }

  double w = 0.5 * (lo + hi);
  double hw = h(w);
  int iter = 0;
  while (std::abs(hw) > tol && iter < config_.max_solver_iterations) {
    if (hw > 0.0) {
      hi = w;
    } else {
      lo = w;
    }
    const double next = 0.5 * (lo + hi);
    if (next == w) break;  // bracket exhausted at double resolution
    w = next;
    hw = h(w);
    ++iter;
  }
  if (!(std::abs(hw) <= tol)) {
    // Fall back to the endpoint with the smaller residual before giving up.
    const double h_end = std::min(std::abs(h(lo)), std::abs(h(hi)));
    if (!(std::min(std::abs(hw), h_end) <= tol)) {
      throw SolverDiverged("CompositeLearner: residual above tolerance");
    }
    if (std::abs(h(lo)) <= tol) {
      w = lo;
    } else if (std::abs(h(hi)) <= tol) {
      w = hi;
    }
    hw = h(w);
  }
  last_solve_.iterate = w;
  last_solve_.residual = std::abs(hw);
  last_solve_.iterations = iter;
  return w;
}

void CompositeLearner::update(double g) {
  if (!pending_) {
    throw Error("CompositeLearner: update() requires a preceding predict()");
  }
  if (!(std::abs(g) <= config_.b * (1.0 + kCostSlack))) {
    throw CostOutOfRange("CompositeLearner: |g| exceeds b");
  }
  g = std::clamp(g, -config_.b, config_.b);

  // Finalize the round: insert w_t, then evaluate grad psi_t(w_t); the
  // freshly inserted slot makes this identical to the solve-time gradient.
  const double w = last_solve_.iterate;
  pieces_[0].advance(w);
  pieces_[1].advance(w);
  const double gpsi = psi_grad(pieces(), w);

  center_.update(g + gpsi);
  weight_.update(-(g + gpsi) * gpsi);
  pending_ = false;
  ++rounds_seen_;
}

double composite_regret_bound_rhs(const CompositeConfig& config, double delta,
                                  double u) {
  config.validate();
  if (!(delta > 0.0) || !(delta <= 1.0)) {
    throw InvalidConfig("composite_regret_bound_rhs: delta must be in (0, 1]");
  }
  const PsiConstants k = compute_psi_constants(
      config.sigma, config.b, delta, config.epsilon, config.horizon);
  const double sigma = config.sigma;
  const double b = config.b;
  const double eps = config.epsilon;
  const double T = static_cast<double>(config.horizon);
  const double H = k.lipschitz;
  const double A = kBaseRegretSqrtCoeff;
  const double B = kBaseRegretLogCoeff;
  const double C = kBaseRegretHorizonPow;
  const double au = std::abs(u);
  constexpr double kLn2 = 0.6931471805599453094172321;

  // ln((224/delta) [ln(1 + (b/sigma) 2^(T+2)) + 2]^2), evaluated in log
  // space exactly as in compute_psi_constants.
  const double inner = log1p_exp(std::log(b / sigma) + (T + 2.0) * kLn2);
  const double log224 =
      std::log(224.0 / delta) + 2.0 * std::log(inner + 2.0);

  const double eps_term = eps * (3.0 + (8.0 * sigma / (b + H)) * log224);
  if (au == 0.0) return eps_term;

  const double N =
      1.0 + std::log1p((b + H) * (b + H) * au * au * std::pow(T, C) /
                       (eps * eps));
  const double grad_sq_budget =
      1.5 * T * sigma * sigma + (5.0 / 3.0) * b * b * std::log(2.0 / delta);
  const double term_u =
      au * (4.0 * k.c1 * (A * A + B) * N +
            1.5 * A * std::sqrt(N * grad_sq_budget));

  // The |u| b [... + (c2 ln T / b)(...)] bracket, multiplied out so b -> 0
  // limits stay finite.
  const double log_ratio = std::log(au / k.alpha2);
  const double tail =
      (A * A + 2.0 * B) * N +
      3.0 * (std::max(0.0, std::log(T) * (log_ratio + 1.0)) + 4.0);
  const double term_ub = au * b * (2.0 * B * N + 4.0 * std::log(8.0 / delta)) +
                         au * k.c2 * std::log(T) * tail;

  const double term_sqrt =
      au * std::sqrt(T) *
      (2.0 * k.c1 *
           (std::sqrt(std::log1p(T * au * k.c1 * k.c1 / (eps * eps))) + 1.0) +
       sigma * std::sqrt(2.0 * std::log(8.0 / delta)));

  return eps_term + term_u + term_ub + term_sqrt;
}

}  // namespace heavytail
