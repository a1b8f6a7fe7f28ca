// Calibrated gradient-noise models for experiments.
//
// Every model is symmetric about zero and calibrated analytically so that
// its p-th absolute moment equals target_sigma^p for the configured moment
// power p:
//
//   symmetric Pareto, tail a:  X = sign * s * U^(-1/a),
//       E|X|^p = s^p a/(a-p)              (finite only for a > p),
//   Student-t, dof k:          X = s * t_k,
//       E|t_k|^p = k^(p/2) G((p+1)/2) G((k-p)/2) / (sqrt(pi) G(k/2)),
//   bounded uniform:           X = s * U[-1, 1],
//       E|X|^p = s^p / (p+1),
//
// where s is the scale solved from the closed form.  Vector noise is the
// scalar draw times an independent uniform direction on the sphere, so the
// norm keeps exactly the calibrated moments.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "heavytail/errors.hpp"
#include "heavytail/rng.hpp"

namespace heavytail {

enum class NoiseKind {
  kNone,
  kSymmetricPareto,
  kStudentT,
  kBoundedUniform,
};

struct NoiseSpec {
  NoiseKind kind = NoiseKind::kNone;
  double target_sigma = 1.0;  // calibration target (> 0 unless kNone)
  double moment_power = 2.0;  // p in (1, 2]
  double tail_index = 3.0;    // Pareto only; must exceed moment_power
  double dof = 3.0;           // Student-t only; must exceed moment_power
};

class NoiseModel {
 public:
  // Validates the spec and solves the scale; throws MomentInfeasible when
  // the requested moment does not exist for the kind's parameters.
  static NoiseModel make(const NoiseSpec& spec);

  double sample(CounterRng& rng) const;
  std::vector<double> sample_vector(CounterRng& rng,
                                    std::int64_t dimension) const;

  // E|X|^q for the calibrated model; throws MomentInfeasible if infinite.
  double analytic_abs_moment(double q) const;

  // Hard support bound, if any (bounded uniform: scale; none: 0).
  bool bounded() const;
  double bound() const;

  const NoiseSpec& spec() const { return spec_; }
  double scale() const { return scale_; }

 private:
  NoiseModel(const NoiseSpec& spec, double scale)
      : spec_(spec), scale_(scale) {}

  NoiseSpec spec_;
  double scale_ = 0.0;
};

// Names used by config files and error messages.
std::string to_string(NoiseKind kind);

}  // namespace heavytail
