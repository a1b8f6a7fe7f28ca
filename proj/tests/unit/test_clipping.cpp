// Clipping: the truncation operator, the moment bounds it certifies, the
// threshold default, wiring of the clipped learner, and a Monte Carlo audit
// of the bias / second-moment bounds under calibrated Pareto noise.
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "heavytail/clipping.hpp"
#include "heavytail/harness/noise.hpp"
#include "heavytail/rng.hpp"

using namespace heavytail;

TEST_CASE("scalar clip pins") {
  CHECK(clip(3.0, 2.0) == 2.0);
  CHECK(clip(-3.0, 2.0) == -2.0);
  CHECK(clip(1.5, 2.0) == 1.5);
  CHECK(clip(2.0, 2.0) == 2.0);  // boundary passes through untouched
  CHECK(clip(0.0, 2.0) == 0.0);
  CHECK(clip(-0.25, 1e-3) == -1e-3);
}

TEST_CASE("vector clip rescales onto the ball and keeps direction") {
  const std::vector<double> g = {3.0, 4.0};
  const std::vector<double> clipped = clip(g, 2.5);
  REQUIRE(clipped.size() == 2);
  CHECK(clipped[0] == 1.5);
  CHECK(clipped[1] == 2.0);

  const std::vector<double> inside = clip(g, 6.0);
  CHECK(inside[0] == 3.0);
  CHECK(inside[1] == 4.0);

  const std::vector<double> zero = clip(std::vector<double>{0.0, 0.0}, 1.0);
  CHECK(zero[0] == 0.0);
  CHECK(zero[1] == 0.0);

  CounterRng rng(501, 0, 0);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t d = 1 + static_cast<std::size_t>(rng.uniform01() * 6.0);
    std::vector<double> v(d);
    for (double& x : v) x = rng.uniform(-10.0, 10.0);
    const double tau = std::exp(rng.uniform(std::log(0.1), std::log(20.0)));
    const std::vector<double> out = clip(v, tau);
    double norm_sq = 0.0;
    double in_sq = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      norm_sq += out[i] * out[i];
      in_sq += v[i] * v[i];
      // Collinearity: all 2x2 minors with the input vanish.
      for (std::size_t j = 0; j < i; ++j) {
        CHECK(std::abs(out[i] * v[j] - out[j] * v[i]) <=
              1e-12 * (std::abs(v[i]) + std::abs(v[j])) * tau);
      }
    }
    CHECK(std::sqrt(norm_sq) <= tau * (1.0 + 1e-12));
    if (std::sqrt(in_sq) <= tau) {
      for (std::size_t i = 0; i < d; ++i) CHECK(out[i] == v[i]);
    }
  }
}

TEST_CASE("moment bounds: pins, threshold substitution, monotonicity") {
  // p = 2, sigma = 3, G = 4, tau = 50: mass = 2(9+16) = 50, so the bias is
  // 50/50 = 1 and the second moment is 50 * tau^0 = 50.
  const ClippedMomentBounds pin = clipped_moment_bounds(2.0, 3.0, 4.0, 50.0);
  CHECK(pin.bias == 1.0);
  CHECK(pin.second_moment == 50.0);
  CHECK(default_clip_threshold(2.0, 3.0, 4.0, 100) == 50.0);

  // At the default threshold tau^p = T (sigma^p + G^p), the second-moment
  // bound collapses to 2^(p-1) tau^2 / T.
  for (double p : {1.2, 1.5, 2.0}) {
    const std::int64_t T = 400;
    const double tau = default_clip_threshold(p, 3.0, 4.0, T);
    const ClippedMomentBounds bounds = clipped_moment_bounds(p, 3.0, 4.0, tau);
    const double expected =
        std::pow(2.0, p - 1.0) * tau * tau / static_cast<double>(T);
    CHECK(bounds.second_moment == doctest::Approx(expected).epsilon(1e-12));
  }

  CounterRng rng(503, 0, 0);
  for (int trial = 0; trial < 500; ++trial) {
    const double p = rng.uniform(1.0 + 1e-9, 2.0);
    const double sigma = rng.uniform(0.1, 5.0);
    const double g = rng.uniform(0.0, 5.0);
    double tau1 = std::exp(rng.uniform(std::log(0.1), std::log(100.0)));
    double tau2 = std::exp(rng.uniform(std::log(0.1), std::log(100.0)));
    if (tau1 > tau2) std::swap(tau1, tau2);
    const ClippedMomentBounds b1 = clipped_moment_bounds(p, sigma, g, tau1);
    const ClippedMomentBounds b2 = clipped_moment_bounds(p, sigma, g, tau2);
    CHECK(b2.bias <= b1.bias * (1.0 + 1e-12));
    CHECK(b2.second_moment >= b1.second_moment * (1.0 - 1e-12));
    // Raising the horizon raises the default threshold.
    CHECK(default_clip_threshold(p, sigma, g, 1000) >
          default_clip_threshold(p, sigma, g, 10));
  }
}

TEST_CASE("moment bound and config validation") {
  CHECK_THROWS_AS(clipped_moment_bounds(1.0, 1.0, 1.0, 1.0), InvalidConfig);
  CHECK_THROWS_AS(clipped_moment_bounds(2.5, 1.0, 1.0, 1.0), InvalidConfig);
  CHECK_THROWS_AS(clipped_moment_bounds(2.0, -1.0, 1.0, 1.0), InvalidConfig);
  CHECK_THROWS_AS(clipped_moment_bounds(2.0, 1.0, 1.0, 0.0), InvalidConfig);
  CHECK_THROWS_AS(default_clip_threshold(2.0, 1.0, 1.0, 0), InvalidConfig);

  ClippedConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  auto expect_invalid = [](auto&& mutate) {
    ClippedConfig bad;
    mutate(bad);
    CHECK_THROWS_AS(bad.validate(), InvalidConfig);
  };
  expect_invalid([](ClippedConfig& c) { c.sigma = 0.0; });
  expect_invalid([](ClippedConfig& c) { c.lipschitz = -1.0; });
  expect_invalid([](ClippedConfig& c) { c.moment_power = 1.0; });
  expect_invalid([](ClippedConfig& c) { c.moment_power = 2.5; });
  expect_invalid([](ClippedConfig& c) { c.delta = 0.0; });
  expect_invalid([](ClippedConfig& c) { c.delta = 1.5; });
  expect_invalid([](ClippedConfig& c) { c.epsilon = 0.0; });
  expect_invalid([](ClippedConfig& c) { c.horizon = 2; });
  expect_invalid([](ClippedConfig& c) { c.tau = -1.0; });
  expect_invalid([](ClippedConfig& c) {
    c.tau = std::numeric_limits<double>::infinity();
  });
}

TEST_CASE("clipped learner wires threshold, penalty and inner config") {
  ClippedConfig cfg;
  cfg.sigma = 3.0;
  cfg.lipschitz = 4.0;
  cfg.moment_power = 2.0;
  cfg.horizon = 100;
  ClippedLearner learner(cfg);
  CHECK(learner.tau() == 50.0);  // default threshold kicks in

  const ClippedMomentBounds bounds =
      clipped_moment_bounds(2.0, 3.0, 4.0, learner.tau());
  CHECK(learner.phi().slope == bounds.bias);
  CHECK(learner.inner().config().sigma == std::sqrt(bounds.second_moment));
  CHECK(learner.inner().config().b == learner.tau() + learner.phi().slope);
  CHECK(learner.inner().config().delta == cfg.delta);
  CHECK(learner.inner().config().epsilon == cfg.epsilon);
  CHECK(learner.inner().config().horizon == cfg.horizon);

  ClippedConfig manual = cfg;
  manual.tau = 7.0;
  ClippedLearner overridden(manual);
  CHECK(overridden.tau() == 7.0);
  CHECK(overridden.phi().slope ==
        clipped_moment_bounds(2.0, 3.0, 4.0, 7.0).bias);
}

TEST_CASE("clipped learner truncates exactly when the cost leaves the ball") {
  ClippedConfig cfg;
  cfg.sigma = 1.0;
  cfg.lipschitz = 1.0;
  cfg.moment_power = 1.5;
  cfg.horizon = 600;
  ClippedLearner learner(cfg);
  const double tau = learner.tau();

  learner.predict();
  learner.update(10.0 * tau);
  CHECK(learner.last_update_clipped());
  learner.predict();
  learner.update(0.1);
  CHECK_FALSE(learner.last_update_clipped());
  learner.predict();
  learner.update(tau);  // boundary is not a truncation
  CHECK_FALSE(learner.last_update_clipped());
  learner.predict();
  CHECK_NOTHROW(learner.update(1e12));  // arbitrarily heavy tails are fine
  CHECK(learner.last_update_clipped());
  learner.predict();
  CHECK_THROWS_AS(learner.update(std::nan("")), CostOutOfRange);

  // A long heavy-tailed stream never overflows the inner cost bound, and
  // the flag tracks |g| > tau exactly.
  NoiseSpec spec;
  spec.kind = NoiseKind::kSymmetricPareto;
  spec.target_sigma = 1.0;
  spec.moment_power = 1.5;
  spec.tail_index = 1.75;
  const NoiseModel noise = NoiseModel::make(spec);
  CounterRng rng(509, 0, 0);
  for (int t = 0; t < 500; ++t) {
    const double w = learner.predict();
    const double g = cfg.lipschitz * (w >= 0.0 ? 1.0 : -1.0) + noise.sample(rng);
    CHECK_NOTHROW(learner.update(g));
    CHECK(learner.last_update_clipped() == (std::abs(g) > tau));
  }
}

TEST_CASE("monte carlo audit of the clipping moment lemma") {
  // g = G + X with X calibrated symmetric Pareto: E|X|^p = sigma^p and
  // E g = G, so both lemma bounds must hold within Monte Carlo error.
  const double sigma = 1.0;
  const double g_mean = 0.5;
  const int n = 100000;
  for (double p : {1.5, 2.0}) {
    NoiseSpec spec;
    spec.kind = NoiseKind::kSymmetricPareto;
    spec.target_sigma = sigma;
    spec.moment_power = p;
    spec.tail_index = 3.0;
    const NoiseModel noise = NoiseModel::make(spec);
    for (double tau : {3.0, 10.0}) {
      const ClippedMomentBounds bounds =
          clipped_moment_bounds(p, sigma, g_mean, tau);
      CounterRng rng(521, static_cast<std::uint64_t>(p * 2.0),
                     static_cast<std::uint64_t>(tau));
      double sum = 0.0;
      double sum_sq = 0.0;
      for (int i = 0; i < n; ++i) {
        const double clipped = clip(g_mean + noise.sample(rng), tau);
        sum += clipped;
        sum_sq += clipped * clipped;
      }
      const double se_mean = tau / std::sqrt(static_cast<double>(n));
      const double se_sq = tau * tau / std::sqrt(static_cast<double>(n));
      CHECK(std::abs(sum / n - g_mean) <= bounds.bias + 3.0 * se_mean);
      CHECK(sum_sq / n <= bounds.second_moment + 3.0 * se_sq);
    }
  }
}
