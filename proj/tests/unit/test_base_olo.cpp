// Base coin-betting learner: wealth mechanics, domain constraints, the
// per-round wealth growth bound, the pinned pathwise regret envelope, and
// the rescaling wrapper identities.
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "heavytail/base_olo.hpp"
#include "heavytail/rng.hpp"

using namespace heavytail;

namespace {

// The module's documented pathwise regret envelope at comparator u:
//   eps + A|u| sqrt(S (1 + ln(u^2 T^C / eps^2 + 1))) + B|u| ln(|u| T^C / eps + 1)
// with S = sum of squared costs.
double regret_envelope(double epsilon, double u, double cost_sq_sum,
                       double horizon) {
  const double au = std::abs(u);
  if (au == 0.0) return epsilon;
  const double tc = std::pow(horizon, kBaseRegretHorizonPow);
  const double sqrt_arg =
      cost_sq_sum * (1.0 + std::log(u * u * tc / (epsilon * epsilon) + 1.0));
  return epsilon + kBaseRegretSqrtCoeff * au * std::sqrt(sqrt_arg) +
         kBaseRegretLogCoeff * au * std::log(au * tc / epsilon + 1.0);
}

}  // namespace

TEST_CASE("fresh learner predicts zero and validates epsilon") {
  CHECK(BaseLearner(1.0).predict() == 0.0);
  CHECK(BaseLearner(1e-6, Domain::kNonnegativeHalfLine).predict() == 0.0);
  CHECK(BaseLearner(1e9).predict() == 0.0);
  CHECK_THROWS_AS(BaseLearner(0.0), InvalidConfig);
  CHECK_THROWS_AS(BaseLearner(-1.0), InvalidConfig);
  CHECK_THROWS_AS(BaseLearner(std::nan("")), InvalidConfig);
}

TEST_CASE("zero cost leaves wealth and fraction untouched") {
  BaseLearner learner(2.0);
  learner.update(0.7);
  learner.update(-0.3);
  const double wealth = learner.wealth();
  const double fraction = learner.betting_fraction();
  learner.update(0.0);
  CHECK(learner.wealth() == wealth);
  CHECK(learner.betting_fraction() == fraction);
  CHECK(learner.rounds_seen() == 3);
}

TEST_CASE("wealth follows the betting recurrence bit-exactly") {
  // W_t = W_{t-1} (1 - c_t beta_t), checked against the live state on a
  // random drive; the worked 1 * (1 - 1 * 0.25) = 0.75 case is the same
  // recurrence at beta = 0.25.
  CounterRng rng(101, 0, 0);
  BaseLearner learner(1.0);
  for (int t = 0; t < 200; ++t) {
    const double wealth_before = learner.wealth();
    const double beta_before = learner.betting_fraction();
    const double c = rng.uniform(-1.0, 1.0);
    learner.update(c);
    CHECK(learner.wealth() == wealth_before * (1.0 - c * beta_before));
    CHECK(learner.wealth() > 0.0);
  }
  CHECK(1.0 * (1.0 - 1.0 * 0.25) == 0.75);
}

TEST_CASE("betting fraction stays in its confinement box") {
  for (Domain domain : {Domain::kFullLine, Domain::kNonnegativeHalfLine}) {
    BaseLearner learner(1.0, domain);
    CounterRng rng(103, static_cast<std::uint64_t>(domain), 0);
    const double lo = domain == Domain::kNonnegativeHalfLine ? 0.0 : -0.5;
    for (int t = 0; t < 5000; ++t) {
      learner.update(rng.sign());
      CHECK(learner.betting_fraction() >= lo);
      CHECK(learner.betting_fraction() <= 0.5);
    }
  }
}

TEST_CASE("costs beyond the slack raise CostOutOfRange") {
  BaseLearner learner(1.0);
  CHECK_THROWS_AS(learner.update(1.0 + 3e-9), CostOutOfRange);
  CHECK_THROWS_AS(learner.update(-1.1), CostOutOfRange);
  CHECK_THROWS_AS(learner.update(std::nan("")), CostOutOfRange);
  // Within the slack the cost is clamped to the bound.
  learner.update(0.5);  // move beta off zero so the clamp is observable
  const double wealth = learner.wealth();
  const double beta = learner.betting_fraction();
  learner.update(-(1.0 + 0.5e-9));
  CHECK(learner.wealth() == wealth * (1.0 + beta));
}

TEST_CASE("wealth stays positive and the half line never goes negative") {
  for (Domain domain : {Domain::kFullLine, Domain::kNonnegativeHalfLine}) {
    for (std::uint64_t stream = 0; stream < 10; ++stream) {
      BaseLearner learner(0.5, domain);
      CounterRng rng(107, stream, static_cast<std::uint64_t>(domain));
      for (int t = 0; t < 1000; ++t) {
        const double w = learner.predict();
        if (domain == Domain::kNonnegativeHalfLine) CHECK(w >= 0.0);
        learner.update(rng.uniform(-1.0, 1.0));
        CHECK(learner.wealth() > 0.0);
      }
    }
  }
}

TEST_CASE("iterates obey the doubling growth bound on all +-1 sequences") {
  // Exhaustive over the 2^10 sign sequences of length 10, both domains,
  // a few epsilon scales: |w_t| <= (eps/2) 2^t at every round.
  for (double eps : {0.1, 1.0, 10.0}) {
    for (Domain domain : {Domain::kFullLine, Domain::kNonnegativeHalfLine}) {
      for (unsigned mask = 0; mask < (1u << 10); ++mask) {
        BaseLearner learner(eps, domain);
        for (int t = 1; t <= 10; ++t) {
          const double w = learner.predict();
          CHECK(std::abs(w) <= (eps / 2.0) * std::ldexp(1.0, t));
          learner.update((mask >> (t - 1)) & 1u ? 1.0 : -1.0);
        }
      }
    }
  }
}

TEST_CASE("growth bound holds on random length-30 cost sequences") {
  const double eps = 1.0;
  for (std::uint64_t stream = 0; stream < 1000; ++stream) {
    BaseLearner learner(eps);
    CounterRng rng(109, stream, 0);
    for (int t = 1; t <= 30; ++t) {
      CHECK(std::abs(learner.predict()) <= (eps / 2.0) * std::ldexp(1.0, t));
      learner.update(rng.uniform(-1.0, 1.0));
    }
  }
}

TEST_CASE("constant adverse costs keep regret at the origin below epsilon") {
  // With c_t = 1 every round, sum c_t w_t = eps - W_T < eps since wealth
  // stays positive: the constant-regret-at-origin guarantee.
  BaseLearner learner(0.25);
  double regret0 = 0.0;
  for (int t = 0; t < 2000; ++t) {
    regret0 += learner.predict();
    learner.update(1.0);
  }
  CHECK(regret0 <= 0.25);
}

TEST_CASE("pathwise regret envelope holds on random sequences") {
  // 10^3 random sequences across stream kinds and lengths; comparator grid
  // {0, +-0.1, +-1, +-10} (nonnegative half for the half-line domain).
  const std::vector<double> full_grid = {0.0, 0.1, -0.1, 1.0, -1.0, 10.0, -10.0};
  const std::vector<double> half_grid = {0.0, 0.1, 1.0, 10.0};
  int runs = 0;
  for (std::uint64_t stream = 0; stream < 500; ++stream) {
    CounterRng meta(211, stream, 0);
    const int T = 10 + static_cast<int>(meta.uniform01() * 2990.0);
    const double eps =
        std::exp(meta.uniform(std::log(0.01), std::log(100.0)));
    const int kind = static_cast<int>(meta.uniform01() * 4.0);
    for (Domain domain : {Domain::kFullLine, Domain::kNonnegativeHalfLine}) {
      BaseLearner learner(eps, domain);
      const bool half = domain == Domain::kNonnegativeHalfLine;
      const std::vector<double>& grid = half ? half_grid : full_grid;
      std::vector<double> costs;
      costs.reserve(static_cast<std::size_t>(T));
      CounterRng rng(223, stream, static_cast<std::uint64_t>(domain));
      std::vector<double> regret(grid.size(), 0.0);
      double s = 0.0;
      for (int t = 0; t < T; ++t) {
        const double w = learner.predict();
        double c = 0.0;
        switch (kind) {
          case 0: c = rng.uniform(-1.0, 1.0); break;           // uniform
          case 1: c = rng.sign(); break;                       // Rademacher
          case 2: c = w == 0.0 ? rng.sign() : (w > 0 ? 1.0 : -1.0); break;
          case 3: c = 0.3 + 0.7 * rng.sign(); break;           // drifting
        }
        for (std::size_t j = 0; j < grid.size(); ++j) {
          regret[j] += c * (w - grid[j]);
        }
        s += c * c;
        learner.update(c);
      }
      for (std::size_t j = 0; j < grid.size(); ++j) {
        CHECK(regret[j] <=
              regret_envelope(eps, grid[j], s, static_cast<double>(T)) + 1e-9);
      }
      ++runs;
    }
  }
  CHECK(runs == 1000);
}

TEST_CASE("rescale wrapper validates its factors") {
  RescaleWrapper scales;
  scales.validate();
  scales.outer_lipschitz = 0.0;
  CHECK_THROWS_AS(scales.validate(), InvalidConfig);
  scales.outer_lipschitz = 5.0;
  scales.inner_epsilon = -1.0;
  CHECK_THROWS_AS(scales.validate(), InvalidConfig);

  RescaleWrapper bad_inner;
  bad_inner.inner_lipschitz = 2.0;  // the wrapped inner learner is unit-bound
  CHECK_THROWS_AS(RescaledLearner(bad_inner, Domain::kFullLine),
                  InvalidConfig);
}

TEST_CASE("unit scale factors make the wrapper an identity") {
  RescaleWrapper scales;  // all ones
  RescaledLearner wrapped(scales, Domain::kFullLine);
  BaseLearner twin(1.0, Domain::kFullLine);
  CounterRng rng(227, 0, 0);
  for (int t = 0; t < 500; ++t) {
    CHECK(wrapped.predict() == twin.predict());
    const double c = rng.uniform(-1.0, 1.0);
    wrapped.update(c);
    twin.update(c);
  }
}

TEST_CASE("wrapper equals a manually scaled twin to the last bit") {
  // Algorithm-1-style scales: outer bound b + H, shared epsilon.
  RescaleWrapper scales;
  scales.outer_lipschitz = 37.5;
  scales.inner_epsilon = 0.8;
  scales.outer_epsilon = 3.2;
  RescaledLearner wrapped(scales, Domain::kFullLine);
  BaseLearner twin(scales.inner_epsilon, Domain::kFullLine);
  CounterRng rng(229, 0, 0);
  for (int t = 0; t < 1000; ++t) {
    CHECK(wrapped.predict() == scales.output_scale() * twin.predict());
    const double outer_cost = rng.uniform(-37.5, 37.5);
    wrapped.update(outer_cost);
    twin.update(outer_cost * scales.cost_scale());
    CHECK(wrapped.inner().wealth() == twin.wealth());
    CHECK(wrapped.inner().betting_fraction() == twin.betting_fraction());
  }
  CHECK_THROWS_AS(wrapped.update(37.6), CostOutOfRange);
}

TEST_CASE("wrapper regret maps to inner regret by the scale identity") {
  // Outer regret at u equals (eps_bar/eps) x inner regret at the comparator
  // (eps G_bar / eps_bar) u (inner G = 1).
  RescaleWrapper scales;
  scales.outer_lipschitz = 12.0;
  scales.inner_epsilon = 0.5;
  scales.outer_epsilon = 2.0;
  RescaledLearner wrapped(scales, Domain::kFullLine);
  BaseLearner twin(scales.inner_epsilon, Domain::kFullLine);
  CounterRng rng(233, 0, 0);
  const double u = 1.7;
  const double inner_u =
      scales.inner_epsilon * scales.outer_lipschitz / scales.outer_epsilon * u;
  double outer_regret = 0.0;
  double inner_regret = 0.0;
  for (int t = 0; t < 2000; ++t) {
    const double outer_cost = rng.uniform(-12.0, 12.0);
    outer_regret += outer_cost * (wrapped.predict() - u);
    inner_regret +=
        outer_cost * scales.cost_scale() * (twin.predict() - inner_u);
    wrapped.update(outer_cost);
    twin.update(outer_cost * scales.cost_scale());
  }
  const double mapped =
      scales.outer_epsilon / scales.inner_epsilon * inner_regret;
  CHECK(outer_regret ==
        doctest::Approx(mapped).epsilon(1e-9));
}
