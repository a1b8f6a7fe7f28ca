#include "heavytail/harness/coverage.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>
#include <thread>
#include <vector>

#include "heavytail/harness/experiment.hpp"
#include "heavytail/rng.hpp"

namespace heavytail {
namespace {

constexpr double kSqrt3 = 1.7320508075688772;

// Scalar design: adversarially doubling weights starting tiny, so the
// envelope's running-max term dominates late rounds while nu = 1e-6 keeps
// the early rounds honest.
constexpr double kScalarBase = 1e-6;

double scalar_weight(std::int64_t i) {
  return kScalarBase * std::ldexp(1.0, static_cast<int>(i));
}

// Vector design: equal-weight two-component spherical Gaussian mixture in
// 2-D, truncated at 3.5 standard radii by resampling.
constexpr double kMixtureScaleLow = 0.5;
constexpr double kMixtureScaleHigh = 1.5;
constexpr double kMixtureTruncRadii = 3.5;
// Truncation only shrinks the radial second moment, so E||X||^2 is at most
// the untruncated mixture value (s_lo^2 + s_hi^2 per coordinate pair).
const double kMixtureSigma =
    std::sqrt(kMixtureScaleLow * kMixtureScaleLow +
              kMixtureScaleHigh * kMixtureScaleHigh);
const double kMixtureRange = kMixtureTruncRadii * kMixtureScaleHigh;

EnvelopeInputs make_inputs(const CoverageSpec& spec) {
  EnvelopeInputs inputs;
  inputs.delta = spec.delta;
  inputs.sigma.resize(static_cast<std::size_t>(spec.horizon));
  inputs.b_running_max.resize(static_cast<std::size_t>(spec.horizon));
  double running_b = 0.0;
  for (std::int64_t i = 1; i <= spec.horizon; ++i) {
    // Certificates use the bounded-to-sub-exponential mapping: conditional
    // second moment sigma_i^2 plus range bound b_i yields (sigma_i, 2 b_i).
    double sigma = 0.0;
    double range = 0.0;
    switch (spec.which) {
      case CoverageKind::kScalar:
        sigma = scalar_weight(i) / kSqrt3;
        range = scalar_weight(i);
        break;
      case CoverageKind::kVector:
        sigma = kMixtureSigma;
        range = kMixtureRange;
        break;
      case CoverageKind::kSquares:
        sigma = 1.0 / kSqrt3;
        range = 1.0;
        break;
    }
    running_b = std::max(running_b, 2.0 * range);
    inputs.sigma[static_cast<std::size_t>(i - 1)] = sigma;
    inputs.b_running_max[static_cast<std::size_t>(i - 1)] = running_b;
  }
  inputs.nu = (spec.which == CoverageKind::kScalar)
                  ? kScalarBase
                  : *std::min_element(inputs.sigma.begin(), inputs.sigma.end());
  return inputs;
}

// Envelope value per round; the scalar envelope is one-sided, so coverage
// applies it to both tails at delta/2 per side.
std::vector<double> precompute_envelopes(const CoverageSpec& spec) {
  EnvelopeInputs inputs = make_inputs(spec);
  if (spec.which == CoverageKind::kScalar) inputs.delta = spec.delta / 2.0;
  std::vector<double> env(static_cast<std::size_t>(spec.horizon));
  for (std::int64_t t = 1; t <= spec.horizon; ++t) {
    double value = 0.0;
    switch (spec.which) {
      case CoverageKind::kScalar:
        value = scalar_envelope(inputs, t);
        break;
      case CoverageKind::kVector:
        value = vector_envelope(inputs, t);
        break;
      case CoverageKind::kSquares:
        value = sum_squares_envelope(inputs, t);
        break;
    }
    env[static_cast<std::size_t>(t - 1)] = value;
  }
  return env;
}

bool simulate_path(const CoverageSpec& spec, const std::vector<double>& env,
                   std::int64_t path) {
  if (spec.which == CoverageKind::kScalar) {
    double sum = 0.0;
    for (std::int64_t t = 1; t <= spec.horizon; ++t) {
      CounterRng rng(spec.master_seed, static_cast<std::uint64_t>(path),
                     static_cast<std::uint64_t>(t), RngLane::kGeneric);
      sum += scalar_weight(t) * rng.uniform(-1.0, 1.0);
      if (std::abs(sum) > env[static_cast<std::size_t>(t - 1)]) return false;
    }
    return true;
  }
  if (spec.which == CoverageKind::kVector) {
    double sum_x = 0.0;
    double sum_y = 0.0;
    for (std::int64_t t = 1; t <= spec.horizon; ++t) {
      CounterRng rng(spec.master_seed, static_cast<std::uint64_t>(path),
                     static_cast<std::uint64_t>(t), RngLane::kGeneric);
      const double scale =
          (rng.uniform01() < 0.5) ? kMixtureScaleLow : kMixtureScaleHigh;
      double x = 0.0;
      double y = 0.0;
      do {
        x = rng.normal();
        y = rng.normal();
      } while (x * x + y * y > kMixtureTruncRadii * kMixtureTruncRadii);
      sum_x += scale * x;
      sum_y += scale * y;
      if (std::hypot(sum_x, sum_y) > env[static_cast<std::size_t>(t - 1)]) {
        return false;
      }
    }
    return true;
  }
  double sum_squares = 0.0;
  for (std::int64_t t = 1; t <= spec.horizon; ++t) {
    CounterRng rng(spec.master_seed, static_cast<std::uint64_t>(path),
                   static_cast<std::uint64_t>(t), RngLane::kGeneric);
    const double z = rng.uniform(-1.0, 1.0);
    sum_squares += z * z;
    if (sum_squares > env[static_cast<std::size_t>(t - 1)]) return false;
  }
  return true;
}

}  // namespace

void CoverageSpec::validate() const {
  if (runs < 1) throw InvalidConfig("coverage: runs must be >= 1");
  if (horizon < 1) throw InvalidConfig("coverage: horizon must be >= 1");
  if (which == CoverageKind::kScalar && horizon > 500) {
    throw InvalidConfig(
        "coverage: scalar horizon must be <= 500 (doubling weights overflow "
        "double precision beyond that)");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw InvalidConfig("coverage: delta must lie in (0, 1)");
  }
}

CoverageResult run_coverage(const CoverageSpec& spec) {
  spec.validate();
  const std::vector<double> env = precompute_envelopes(spec);

  std::atomic<std::int64_t> next_path{0};
  std::atomic<std::int64_t> covered{0};
  auto work = [&]() {
    while (true) {
      const std::int64_t path = next_path.fetch_add(1);
      if (path >= spec.runs) break;
      if (simulate_path(spec, env, path)) covered.fetch_add(1);
    }
  };
  const int workers =
      static_cast<int>(std::min<std::int64_t>(thread_budget(), spec.runs));
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int i = 0; i < workers; ++i) pool.emplace_back(work);
    for (std::thread& th : pool) th.join();
  }

  CoverageResult result;
  result.runs = spec.runs;
  result.covered = covered.load();
  result.fraction =
      static_cast<double>(result.covered) / static_cast<double>(spec.runs);
  result.target = 1.0 - spec.delta;

  // 99% Wilson score interval.
  const double z = 2.5758293035489004;
  const double n = static_cast<double>(spec.runs);
  const double p = result.fraction;
  const double denom = 1.0 + z * z / n;
  const double center = (p + z * z / (2.0 * n)) / denom;
  const double half =
      z * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom;
  result.wilson_low = center - half;
  result.wilson_high = center + half;
  return result;
}

std::string to_string(CoverageKind kind) {
  switch (kind) {
    case CoverageKind::kScalar: return "scalar";
    case CoverageKind::kVector: return "vector";
    case CoverageKind::kSquares: return "squares";
  }
  return "scalar";
}

CoverageKind coverage_kind_from_string(const std::string& name) {
  if (name == "scalar") return CoverageKind::kScalar;
  if (name == "vector") return CoverageKind::kVector;
  if (name == "squares") return CoverageKind::kSquares;
  throw InvalidConfig("unknown coverage kind '" + name +
                      "' (expected scalar, vector, or squares)");
}

}  // namespace heavytail
