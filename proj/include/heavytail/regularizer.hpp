// Cancellation regularizers: per-round modified-Huber pieces, the composite
// regularizer psi built from them, and the linear clipping-bias penalty phi.
//
// A Huber piece with coefficient c, power p and floor alpha0 is, at round t
// with past iterates w_1..w_t,
//
//            { c |w|^p / S_t^(1-1/p),                        |w| <= |w_t|
//   r_t(w) = {
//            { c (p|w| - (p-1)|w_t|) |w_t|^(p-1) / S_t^(1-1/p),  |w| > |w_t|
//
// where S_t = alpha0^p + sum_{i<=t} |w_i|^p.  The two branches agree in
// value and derivative at |w| = |w_t| (C^1), and the gradient magnitude
// never exceeds c*p.  S_t is held as ln S_t and updated by log-sum-exp, so
// powers as large as p = ln T applied to iterates growing like 2^t stay
// finite.  All formulas evaluate through the same exp() factorization on
// both branches, which keeps the kink agreement at machine precision.
#pragma once

#include <cstdint>
#include <span>

#include "heavytail/errors.hpp"

namespace heavytail {

// Static description of one Huber piece.
struct HuberPieceParams {
  double coefficient = 1.0;  // c > 0
  double power = 2.0;        // p >= 1
  double alpha0 = 1.0;       // floor > 0 keeping S_t positive at round 0

  // Throws InvalidConfig when a field is out of range.
  void validate() const;
};

// One Huber piece together with its running power sum.
class HuberPiece {
 public:
  explicit HuberPiece(const HuberPieceParams& params);

  // r_t evaluated at w (uses the piecewise form around the last iterate).
  double value(double w) const;

  // Subgradient of r_t at w; magnitude <= coefficient * power, sign(0) = 0.
  double grad(double w) const;

  // Gradient used inside the round-(t+1) fixed-point solve, where the
  // candidate w occupies the not-yet-inserted slot of the power sum:
  //   sign(w) c p |w|^(p-1) / (|w|^p + S_t)^(1-1/p).
  double solve_grad(double w) const;

  // Appends |w| to the power sum and makes w the kink point.
  void advance(double w);

  // Largest possible |grad| for any state and argument.
  double grad_bound() const;

  const HuberPieceParams& params() const { return params_; }
  double log_power_sum() const { return log_power_sum_; }
  double last_abs_iterate() const { return last_abs_iterate_; }
  std::int64_t rounds_seen() const { return rounds_seen_; }

 private:
  HuberPieceParams params_;
  double log_power_sum_;     // ln S_t
  double last_abs_iterate_;  // |w_t| (0 before the first advance)
  std::int64_t rounds_seen_;
};

// Composite regularizer psi_t = sum of pieces; gradient bound sum_j c_j p_j.
double psi_value(std::span<const HuberPiece> pieces, double w);
double psi_grad(std::span<const HuberPiece> pieces, double w);
double psi_solve_grad(std::span<const HuberPiece> pieces, double w);
double psi_grad_bound(std::span<const HuberPiece> pieces);

// Coefficients, powers and floors of the two-piece composite regularizer for
// noise scale sigma, gradient bound b, confidence delta, initial wealth
// epsilon and horizon T:
//
//   c1 = 2 sigma sqrt(ln((32/delta) [(T+1) ln 2 + 2]^2)),   p1 = 2,
//   c2 = 32 b    ln((224/delta) [ln(1 + (b/sigma) 2^(T+2)) + 2]^2),
//   p2 = ln T,
//   alpha1 = epsilon / c1,
//   alpha2 = epsilon sigma / (4 b (b + H)),   H = c1 p1 + c2 p2.
//
// The inner ln(1 + (b/sigma) 2^(T+2)) is evaluated exactly in log space
// (softplus of ln(b/sigma) + (T+2) ln 2), so no horizon overflows.
struct PsiConstants {
  double c1 = 0.0;
  double c2 = 0.0;
  double p1 = 2.0;
  double p2 = 0.0;
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double lipschitz = 0.0;  // H
};

PsiConstants compute_psi_constants(double sigma, double b, double delta,
                                   double epsilon, std::int64_t horizon);

// Linear penalty phi(w) = slope * |w| compensating clipping bias, with
//   slope = 2^(p-1) (sigma^p + G^p) / tau^(p-1).
struct PhiParams {
  double moment_power = 2.0;  // p in (1, 2]
  double sigma = 0.0;
  double lipschitz = 0.0;  // G
  double tau = 1.0;        // clipping threshold
  double slope = 0.0;      // derived

  void validate() const;
};

// Builds PhiParams with the slope filled in.
PhiParams make_phi_params(double moment_power, double sigma, double lipschitz,
                          double tau);

double phi_value(const PhiParams& phi, double w);
double phi_grad(const PhiParams& phi, double w);  // sign(0) = 0

}  // namespace heavytail
