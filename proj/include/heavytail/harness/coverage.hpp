// Monte-Carlo coverage checks for the concentration envelopes: simulate
// martingale-difference paths whose per-round scale certificates are known
// exactly, and count the fraction of paths that stay under the matching
// envelope simultaneously for every round.
//
// Certificates follow the bounded-to-sub-exponential mapping used by the
// regret analysis: a zero-mean increment with conditional second moment
// sigma^2 and range bound |X| <= b is certified as (sigma, 2b)
// sub-exponential.
//
// Increment designs (all symmetric, hence martingale differences):
//
//   scalar   X_t = w_t U_t, U_t ~ Uniform[-1, 1], with adversarially
//            growing weights w_t = 2^t * 1e-6 (stresses the running-max
//            term); certificate sigma_t = w_t/sqrt(3), b_t = 2 w_t,
//            nu = 1e-6.  The envelope is one-sided, so coverage applies it
//            two-sided to +/-X at delta/2 per side.
//   vector   2-D Gaussian mixture: with probability 1/2 each, draw from a
//            spherical Gaussian of scale 0.5 or 1.5, resampling until the
//            norm is within 3.5 scales (keeps the mean exactly zero and
//            the norm bounded).  E||X||^2 <= 0.5^2 + 1.5^2 = 2.5, so
//            sigma_t = sqrt(2.5), b_t = 2 * 3.5 * 1.5, nu = min sigma.
//   squares  bounded i.i.d. entries Z_t ~ Uniform[-1, 1]:
//            sigma_t = 1/sqrt(3), b_t = 2, nu = min sigma.
//
// Envelope values are deterministic given (delta, horizon), so they are
// precomputed once and shared across paths.
#pragma once

#include <cstdint>
#include <string>

#include "heavytail/concentration.hpp"

namespace heavytail {

enum class CoverageKind { kScalar, kVector, kSquares };

struct CoverageSpec {
  CoverageKind which = CoverageKind::kScalar;
  std::int64_t runs = 10000;
  std::int64_t horizon = 200;
  double delta = 0.05;
  std::uint64_t master_seed = 0;

  void validate() const;
};

struct CoverageResult {
  std::int64_t runs = 0;
  std::int64_t covered = 0;  // paths under the envelope at every round
  double fraction = 0.0;
  double wilson_low = 0.0;   // 99% Wilson interval for the fraction
  double wilson_high = 0.0;
  double target = 0.0;       // 1 - delta
};

// Runs the paths in parallel (thread budget as in run_experiment) and
// aggregates coverage; deterministic given the spec.
CoverageResult run_coverage(const CoverageSpec& spec);

std::string to_string(CoverageKind kind);
CoverageKind coverage_kind_from_string(const std::string& name);

}  // namespace heavytail
