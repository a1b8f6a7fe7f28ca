#include "heavytail/harness/noise.hpp"

#include <cmath>

namespace heavytail {
namespace {

constexpr double kTwoPi = 6.283185307179586476925287;
constexpr double kLogPi = 1.1447298858494001741434273;  // ln(pi)

// E|t_k|^q for a standard Student-t with k degrees of freedom (q < k).
double student_abs_moment(double dof, double q) {
  return std::pow(dof, q / 2.0) *
         std::exp(std::lgamma((q + 1.0) / 2.0) + std::lgamma((dof - q) / 2.0) -
                  0.5 * kLogPi - std::lgamma(dof / 2.0));
}

}  // namespace

NoiseModel NoiseModel::make(const NoiseSpec& spec) {
  if (spec.kind == NoiseKind::kNone) {
    return NoiseModel(spec, 0.0);
  }
  if (!(spec.target_sigma > 0.0) || !std::isfinite(spec.target_sigma)) {
    throw InvalidConfig("NoiseModel: target_sigma must be positive");
  }
  const double p = spec.moment_power;
  if (!(p > 1.0) || !(p <= 2.0)) {
    throw InvalidConfig("NoiseModel: moment_power must be in (1, 2]");
  }
  double unit_moment = 0.0;  // E|X|^p at unit scale
  switch (spec.kind) {
    case NoiseKind::kSymmetricPareto:
      if (!(spec.tail_index > p)) {
        throw MomentInfeasible(
            "NoiseModel: Pareto tail_index must exceed moment_power");
      }
      unit_moment = spec.tail_index / (spec.tail_index - p);
      break;
    case NoiseKind::kStudentT:
      if (!(spec.dof > p)) {
        throw MomentInfeasible(
            "NoiseModel: Student-t dof must exceed moment_power");
      }
      unit_moment = student_abs_moment(spec.dof, p);
      break;
    case NoiseKind::kBoundedUniform:
      unit_moment = 1.0 / (p + 1.0);
      break;
    case NoiseKind::kNone:
      break;
  }
  // Solve s from s^p * unit_moment = target_sigma^p.
  const double scale =
      spec.target_sigma * std::pow(unit_moment, -1.0 / p);
  return NoiseModel(spec, scale);
}

double NoiseModel::sample(CounterRng& rng) const {
  switch (spec_.kind) {
    case NoiseKind::kNone:
      return 0.0;
    case NoiseKind::kSymmetricPareto: {
      const double u = rng.uniform01_open();
      return rng.sign() * scale_ * std::pow(u, -1.0 / spec_.tail_index);
    }
    case NoiseKind::kStudentT: {
      // Bailey's polar method: exact Student-t from two uniforms.
      const double u = rng.uniform01_open();
      const double v = rng.uniform01();
      const double k = spec_.dof;
      const double r = std::sqrt(k * (std::pow(u, -2.0 / k) - 1.0));
      return scale_ * r * std::cos(kTwoPi * v);
    }
    case NoiseKind::kBoundedUniform:
      return scale_ * rng.uniform(-1.0, 1.0);
  }
  return 0.0;
}

std::vector<double> NoiseModel::sample_vector(CounterRng& rng,
                                              std::int64_t dimension) const {
  std::vector<double> out(static_cast<std::size_t>(dimension), 0.0);
  if (spec_.kind == NoiseKind::kNone) return out;
  const double radius = sample(rng);
  if (dimension == 1) {
    out[0] = radius;
    return out;
  }
  // Uniform direction from normalized Gaussians (resample the measure-zero
  // all-zeros draw).
  double norm_sq = 0.0;
  do {
    norm_sq = 0.0;
    for (double& x : out) {
      x = rng.normal();
      norm_sq += x * x;
    }
  } while (norm_sq == 0.0);
  const double scale = radius / std::sqrt(norm_sq);
  for (double& x : out) x *= scale;
  return out;
}

double NoiseModel::analytic_abs_moment(double q) const {
  switch (spec_.kind) {
    case NoiseKind::kNone:
      return 0.0;
    case NoiseKind::kSymmetricPareto:
      if (!(spec_.tail_index > q)) {
        throw MomentInfeasible("NoiseModel: moment of order q is infinite");
      }
      return std::pow(scale_, q) * spec_.tail_index / (spec_.tail_index - q);
    case NoiseKind::kStudentT:
      if (!(spec_.dof > q)) {
        throw MomentInfeasible("NoiseModel: moment of order q is infinite");
      }
      return std::pow(scale_, q) * student_abs_moment(spec_.dof, q);
    case NoiseKind::kBoundedUniform:
      return std::pow(scale_, q) / (q + 1.0);
  }
  return 0.0;
}

bool NoiseModel::bounded() const {
  return spec_.kind == NoiseKind::kNone ||
         spec_.kind == NoiseKind::kBoundedUniform;
}

double NoiseModel::bound() const {
  if (spec_.kind == NoiseKind::kNone) return 0.0;
  if (spec_.kind == NoiseKind::kBoundedUniform) return scale_;
  throw MomentInfeasible("NoiseModel: unbounded noise kind has no hard bound");
}

std::string to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::kNone:
      return "none";
    case NoiseKind::kSymmetricPareto:
      return "pareto";
    case NoiseKind::kStudentT:
      return "student_t";
    case NoiseKind::kBoundedUniform:
      return "bounded_uniform";
  }
  return "unknown";
}

}  // namespace heavytail
