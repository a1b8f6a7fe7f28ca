// Time-uniform concentration envelopes for sub-exponential martingale
// difference sequences, exposed exactly in the closed forms used by the
// regret analysis.  Each envelope holds simultaneously for all t with
// probability at least 1 - delta given valid per-round scale inputs.
#pragma once

#include <cstdint>
#include <vector>

#include "heavytail/errors.hpp"

namespace heavytail {

// Per-round scale information for an MDS X_1, ..., X_n.
//
//   sigma[i-1]          conditional scale of X_i,
//   b_running_max[i-1]  max of the range/sub-exponential bounds b_1..b_i
//                       (must be nondecreasing),
//   nu                  free positive constant of the envelope (typically
//                       epsilon * sigma / (b + H) in regret consumers, or
//                       min_i sigma_i in generic checks),
//   delta               confidence in (0, 1].
struct EnvelopeInputs {
  std::vector<double> sigma;
  std::vector<double> b_running_max;
  double nu = 1.0;
  double delta = 0.05;

  void validate() const;
};

// One-sided scalar bound: with probability 1 - delta, for all t,
//   sum_{i<=t} X_i <= 2 sqrt(S2 ln((4/d) [ln([sqrt(S2/(2 nu^2))]_1) + 2]^2))
//                   + 8 M ln((28/d) [ln(M/nu) + 2]^2),
// with S2 = sum_{i<=t} sigma_i^2, M = max(nu, max_{i<=t} b_i), [x]_1 =
// max(1, x).  Requires (sigma_i, b_i) sub-exponential increments.
double scalar_envelope(const EnvelopeInputs& inputs, std::int64_t t);

// Norm bound for vector-valued MDS with E||X_i||^2 <= sigma_i^2 and
// ||X_i|| <= b_i:
//   5 sqrt(S2 ln((16/d) [ln([sqrt(S2/nu^2)]_1) + 2]^2))
//   + 23 M ln((224/d) [ln(2M/nu) + 2]^2).
double vector_envelope(const EnvelopeInputs& inputs, std::int64_t t);

// Bound on sum_{i<=t} Z_i^2 for adapted Z_i with E[Z_i^2] <= sigma_i^2 and
// |Z_i| <= b_i:
//   3 S2 ln((4/d) [ln([sqrt(S2/nu^2)]_1) + 2]^2)
//   + 20 max(nu^2, max b_i^2) ln((112/d) [ln(2M/nu) + 1]^2).
double sum_squares_envelope(const EnvelopeInputs& inputs, std::int64_t t);

// Fixed-parameter simultaneous bounds for an MDS with constant scales
// (E[X^2] <= sigma^2, |X| <= b): the running sum and the running sum of
// squares, each holding for all t <= T with probability 1 - delta.
struct FixedParamBounds {
  double sum_bound = 0.0;      // 2 b ln(1/delta) + sigma sqrt(2 T ln(1/delta))
  double squares_bound = 0.0;  // (3/2) sigma^2 T + (5/3) b^2 ln(1/delta)
};

FixedParamBounds fixed_param_bounds(double sigma, double b, std::int64_t T,
                                    double delta);

}  // namespace heavytail
