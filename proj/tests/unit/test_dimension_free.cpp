// Dimension-free reduction: the ball FTRL closed form (pinned and checked
// against a numeric solver), the scale book-keeping of the magnitude
// learner, and the algebraic identity that transports scalar regret.
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "heavytail/dimension_free.hpp"
#include "heavytail/rng.hpp"

using namespace heavytail;

namespace {

double norm(const std::vector<double>& v) {
  double sq = 0.0;
  for (double x : v) sq += x * x;
  return std::sqrt(sq);
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

ReductionConfig make_config(double sigma, double g, double p,
                            std::int64_t horizon, std::int64_t dimension) {
  ReductionConfig cfg;
  cfg.sigma = sigma;
  cfg.lipschitz = g;
  cfg.moment_power = p;
  cfg.horizon = horizon;
  cfg.dimension = dimension;
  return cfg;
}

}  // namespace

TEST_CASE("direction learner closed-form pins") {
  DirectionLearner fresh(3, 5.0, 1.0);
  for (double v : fresh.predict()) CHECK(v == 0.0);

  // Interior: ||eta S|| = 0.5 <= 1 plays -eta S exactly.
  DirectionLearner interior(2, 5.0, 1.0);
  interior.update({0.3, 0.4});
  const std::vector<double> vi = interior.predict();
  CHECK(vi[0] == -0.3);
  CHECK(vi[1] == -0.4);

  // Boundary: ||eta S|| = 5 > 1 projects to -S/||S|| = (-0.6, -0.8).
  DirectionLearner boundary(2, 5.0, 1.0);
  boundary.update({3.0, 4.0});
  const std::vector<double> vb = boundary.predict();
  CHECK(vb[0] == (-1.0 / 5.0) * 3.0);
  CHECK(vb[1] == (-1.0 / 5.0) * 4.0);
  CHECK(vb[0] == doctest::Approx(-0.6).epsilon(1e-15));
  CHECK(vb[1] == doctest::Approx(-0.8).epsilon(1e-15));

  // A zero gradient leaves the state untouched.
  boundary.update({0.0, 0.0});
  const std::vector<double> vb2 = boundary.predict();
  CHECK(vb2[0] == vb[0]);
  CHECK(vb2[1] == vb[1]);

  // Each accumulated increment is clipped to tau.
  DirectionLearner clipping(2, 5.0, 1.0);
  clipping.update({20.0, 0.0});  // norm 2 tau -> clipped to tau
  CHECK(clipping.gradient_sum()[0] == 5.0);
  CHECK(clipping.gradient_sum()[1] == 0.0);

  CHECK_THROWS_AS(DirectionLearner(0, 1.0, 1.0), InvalidConfig);
  CHECK_THROWS_AS(DirectionLearner(2, 0.0, 1.0), InvalidConfig);
  CHECK_THROWS_AS(DirectionLearner(2, 1.0, 0.0), InvalidConfig);
  CHECK_THROWS_AS(clipping.update({1.0, 2.0, 3.0}), DimensionMismatch);
}

TEST_CASE("direction iterates stay in the ball and sums respect the clip") {
  CounterRng rng(701, 0, 0);
  DirectionLearner learner(4, 2.0, 0.7);
  for (int t = 1; t <= 2000; ++t) {
    const std::vector<double> v = learner.predict();
    CHECK(norm(v) <= 1.0 + 1e-12);
    std::vector<double> g(4);
    for (double& x : g) x = rng.uniform(-3.0, 3.0);
    if (rng.uniform01() < 0.1) {
      for (double& x : g) x *= 100.0;  // heavy round, must be clipped
    }
    learner.update(g);
    CHECK(norm(learner.gradient_sum()) <=
          static_cast<double>(t) * learner.tau() * (1.0 + 1e-12));
  }
}

TEST_CASE("ball FTRL closed form agrees with projected gradient descent") {
  CounterRng rng(709, 0, 0);
  const std::int64_t dims[] = {1, 2, 5, 20};
  for (int instance = 0; instance < 1000; ++instance) {
    const std::int64_t d = dims[static_cast<int>(rng.uniform01() * 4.0)];
    const double tau = std::exp(rng.uniform(std::log(0.5), std::log(50.0)));
    const double eta = std::exp(rng.uniform(std::log(0.01), std::log(10.0)));
    DirectionLearner learner(d, tau, eta);
    const int updates = 1 + static_cast<int>(rng.uniform01() * 4.0);
    for (int k = 0; k < updates; ++k) {
      std::vector<double> g(static_cast<std::size_t>(d));
      for (double& x : g) x = rng.uniform(-1.0, 1.0);
      const double target = std::exp(rng.uniform(std::log(0.01), std::log(3.0)));
      const double scale = norm(g) > 0.0 ? target * tau / norm(g) : 0.0;
      for (double& x : g) x *= scale;
      learner.update(g);
    }
    const std::vector<double>& s = learner.gradient_sum();

    // Minimize <S, v> + ||v||^2 / (2 eta) over the unit ball numerically.
    std::vector<double> v(static_cast<std::size_t>(d), 0.0);
    const double lr = 0.9 * eta;
    for (int iter = 0; iter < 500; ++iter) {
      for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] -= lr * (s[i] + v[i] / eta);
      }
      const double n = norm(v);
      if (n > 1.0) {
        for (double& x : v) x /= n;
      }
    }
    const std::vector<double> closed = learner.predict();
    for (std::size_t i = 0; i < v.size(); ++i) {
      CHECK(std::abs(closed[i] - v[i]) <= 1e-8);
    }
  }
}

TEST_CASE("reduction wiring pins the 1-D scales") {
  // sigma = 3, G = 4, p = 2, T = 100:
  //   sigma_1d = sqrt(9 + 2*16) = sqrt(41),
  //   tau_1d   = 10 sqrt(9 + 3*16) = 10 sqrt(57),
  //   direction tau = 10 sqrt(25) = 50, eta = 1/50.
  DimensionFreeLearner learner(make_config(3.0, 4.0, 2.0, 100, 2));
  CHECK(learner.magnitude_learner().config().sigma ==
        doctest::Approx(6.4031242374328485).epsilon(1e-15));
  CHECK(learner.magnitude_learner().tau() ==
        doctest::Approx(75.4983443527075).epsilon(1e-15));
  CHECK(learner.magnitude_learner().config().lipschitz == 4.0);
  CHECK(learner.magnitude_learner().config().moment_power == 2.0);
  CHECK(learner.magnitude_learner().config().horizon == 100);
  CHECK(learner.direction_learner().tau() == 50.0);
  CHECK(learner.direction_learner().eta() == 1.0 / 50.0);
  CHECK(learner.direction_learner().dimension() == 2);

  // G = 0 collapses every threshold to the noise-only scale.
  for (double p : {1.5, 2.0}) {
    DimensionFreeLearner collapsed(make_config(1.0, 0.0, p, 100, 4));
    CHECK(collapsed.magnitude_learner().config().sigma == 1.0);
    CHECK(collapsed.magnitude_learner().tau() ==
          doctest::Approx(std::pow(100.0, 1.0 / p)).epsilon(1e-15));
    CHECK(collapsed.direction_learner().tau() ==
          doctest::Approx(std::pow(100.0, 1.0 / p)).epsilon(1e-15));
  }

  // The magnitude threshold dominates the direction threshold.
  CounterRng rng(719, 0, 0);
  for (int trial = 0; trial < 100; ++trial) {
    const double sigma = std::exp(rng.uniform(std::log(0.1), std::log(10.0)));
    const double g = rng.uniform(0.0, 10.0);
    const double p = rng.uniform(1.0 + 1e-9, 2.0);
    const std::int64_t T = 3 + static_cast<std::int64_t>(rng.uniform01() * 997.0);
    DimensionFreeLearner random_learner(make_config(sigma, g, p, T, 3));
    CHECK(random_learner.magnitude_learner().tau() >=
          random_learner.direction_learner().tau() * (1.0 - 1e-12));
  }

  CHECK_THROWS_AS(DimensionFreeLearner(make_config(0.0, 1.0, 2.0, 100, 2)),
                  InvalidConfig);
  CHECK_THROWS_AS(DimensionFreeLearner(make_config(1.0, -1.0, 2.0, 100, 2)),
                  InvalidConfig);
  CHECK_THROWS_AS(DimensionFreeLearner(make_config(1.0, 1.0, 2.5, 100, 2)),
                  InvalidConfig);
  CHECK_THROWS_AS(DimensionFreeLearner(make_config(1.0, 1.0, 2.0, 2, 2)),
                  InvalidConfig);
  CHECK_THROWS_AS(DimensionFreeLearner(make_config(1.0, 1.0, 2.0, 100, 0)),
                  InvalidConfig);
}

TEST_CASE("reduction round one plays zero and guards its protocol") {
  DimensionFreeLearner learner(make_config(1.0, 1.0, 2.0, 100, 3));
  CHECK_THROWS_AS(learner.update({1.0, 0.0, 0.0}), Error);
  const std::vector<double> w = learner.predict();
  REQUIRE(w.size() == 3);
  for (double x : w) CHECK(x == 0.0);
  CHECK(learner.last_magnitude() == 0.0);
  CHECK_THROWS_AS(learner.update({1.0, 0.0}), DimensionMismatch);
  CHECK_NOTHROW(learner.update({1.0, 0.0, 0.0}));
}

TEST_CASE("reduction identity transports scalar regret exactly") {
  // <g, w - u> = ||u|| <g, v - u/||u||> + <g, v> (x - ||u||) holds round by
  // round, so the vector regret is the directional regret plus the scalar
  // regret of the magnitude learner.
  const std::int64_t d = 5;
  DimensionFreeLearner learner(make_config(1.0, 2.0, 1.5, 2000, d));
  CounterRng rng(727, 0, 0);
  std::vector<double> u = {0.4, -1.0, 0.0, 2.0, 0.7};
  const double u_norm = norm(u);
  std::vector<double> u_dir(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) u_dir[i] = u[i] / u_norm;

  for (int t = 0; t < 2000; ++t) {
    const std::vector<double> w = learner.predict();
    const double x = learner.last_magnitude();
    const std::vector<double> v = learner.last_direction();
    CHECK(norm(w) <= std::abs(x) * (1.0 + 1e-12));

    std::vector<double> g(static_cast<std::size_t>(d));
    for (double& e : g) e = rng.uniform(-2.0, 2.0);
    if (rng.uniform01() < 0.05) {
      for (double& e : g) e *= 200.0;  // heavy-tailed burst
    }

    std::vector<double> v_minus_udir(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      v_minus_udir[i] = v[i] - u_dir[i];
    }
    std::vector<double> w_minus_u(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) w_minus_u[i] = w[i] - u[i];

    const double lhs = dot(g, w_minus_u);
    const double rhs =
        u_norm * dot(g, v_minus_udir) + dot(g, v) * (x - u_norm);
    CHECK(std::abs(lhs - rhs) <=
          1e-9 * (1.0 + std::abs(lhs) + std::abs(rhs) +
                  norm(g) * (std::abs(x) + u_norm)));

    // The scalar cost forwarded to the magnitude learner is |<g, v>| and
    // never exceeds ||g||.
    CHECK(std::abs(dot(g, v)) <= norm(g) * (1.0 + 1e-12));
    learner.update(g);
  }
}
