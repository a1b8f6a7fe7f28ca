#include "heavytail/harness/loss.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "heavytail/logspace.hpp"
#include "heavytail/rng.hpp"

namespace heavytail {

void LossSpec::validate() const {
  if (!(lipschitz > 0.0) || !std::isfinite(lipschitz)) {
    throw InvalidConfig("LossSpec: lipschitz must be positive");
  }
  if (dimension < 1) {
    throw InvalidConfig("LossSpec: dimension must be >= 1");
  }
  if (!(label_noise >= 0.0) || !std::isfinite(label_noise)) {
    throw InvalidConfig("LossSpec: label_noise must be >= 0");
  }
  if (!std::isfinite(target)) {
    throw InvalidConfig("LossSpec: target must be finite");
  }
  if (kind == LossKind::kFixedLinear &&
      std::abs(coefficient) > lipschitz * (1.0 + 1e-12)) {
    throw InvalidConfig("LossSpec: |coefficient| must not exceed lipschitz");
  }
}

LossStream LossStream::generate(const LossSpec& spec,
                                const std::vector<double>& direction,
                                std::uint64_t master_seed, std::uint64_t seed,
                                std::int64_t rounds) {
  spec.validate();
  if (direction.size() != static_cast<std::size_t>(spec.dimension)) {
    throw DimensionMismatch("LossStream: direction dimension mismatch");
  }
  if (rounds < 1) {
    throw InvalidConfig("LossStream: rounds must be >= 1");
  }

  LossStream stream;
  stream.spec_ = spec;
  stream.direction_ = direction;
  stream.rows_.resize(static_cast<std::size_t>(rounds));

  // Per-seed coefficient sign for the fixed linear stream (round key 0).
  double linear_sign = 1.0;
  if (spec.kind == LossKind::kFixedLinear && spec.random_sign) {
    CounterRng rng(master_seed, seed, 0, RngLane::kLossData);
    linear_sign = rng.sign();
  }

  for (std::int64_t t = 1; t <= rounds; ++t) {
    Row& row = stream.rows_[static_cast<std::size_t>(t - 1)];
    CounterRng rng(master_seed, seed, static_cast<std::uint64_t>(t),
                   RngLane::kLossData);
    row.feature.assign(direction.size(), 0.0);
    switch (spec.kind) {
      case LossKind::kAbsoluteRegression: {
        // Features +-G along e; targets centered at <a_t, target * e>.
        const double s = rng.sign();
        for (std::size_t i = 0; i < direction.size(); ++i) {
          row.feature[i] = s * spec.lipschitz * direction[i];
        }
        row.feature_dot_e = s * spec.lipschitz;
        row.target = row.feature_dot_e * spec.target +
                     spec.label_noise * rng.uniform(-1.0, 1.0);
        break;
      }
      case LossKind::kHinge: {
        const double s = rng.sign();
        for (std::size_t i = 0; i < direction.size(); ++i) {
          row.feature[i] = spec.lipschitz * direction[i];
        }
        row.feature_dot_e = spec.lipschitz;
        row.target = s;  // label in {-1, +1}
        break;
      }
      case LossKind::kFixedLinear: {
        for (std::size_t i = 0; i < direction.size(); ++i) {
          row.feature[i] = linear_sign * spec.coefficient * direction[i];
        }
        row.feature_dot_e = linear_sign * spec.coefficient;
        break;
      }
    }
  }
  return stream;
}

double LossStream::inner(const std::vector<double>& a,
                         const std::vector<double>& w) const {
  if (a.size() != w.size()) {
    throw DimensionMismatch("LossStream: iterate dimension mismatch");
  }
  double dot = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * w[i];
  return dot;
}

double LossStream::loss(std::int64_t t, const std::vector<double>& w) const {
  const Row& row = rows_.at(static_cast<std::size_t>(t - 1));
  const double z = inner(row.feature, w);
  switch (spec_.kind) {
    case LossKind::kAbsoluteRegression:
      return std::abs(z - row.target);
    case LossKind::kHinge:
      return std::max(0.0, 1.0 - row.target * z);
    case LossKind::kFixedLinear:
      return z;
  }
  return 0.0;
}

std::vector<double> LossStream::subgrad(std::int64_t t,
                                        const std::vector<double>& w) const {
  const Row& row = rows_.at(static_cast<std::size_t>(t - 1));
  const double z = inner(row.feature, w);
  std::vector<double> g(row.feature.size(), 0.0);
  switch (spec_.kind) {
    case LossKind::kAbsoluteRegression: {
      const double s = sign_of(z - row.target);  // 0 at the kink
      for (std::size_t i = 0; i < g.size(); ++i) g[i] = s * row.feature[i];
      break;
    }
    case LossKind::kHinge: {
      const double margin = 1.0 - row.target * z;
      if (margin > 0.0) {  // the kink (margin == 0) takes the 0 subgradient
        for (std::size_t i = 0; i < g.size(); ++i) {
          g[i] = -row.target * row.feature[i];
        }
      }
      break;
    }
    case LossKind::kFixedLinear:
      g = row.feature;
      break;
  }
  return g;
}

double LossStream::loss_at_scalar(std::int64_t t, double c) const {
  const Row& row = rows_.at(static_cast<std::size_t>(t - 1));
  const double z = row.feature_dot_e * c;
  switch (spec_.kind) {
    case LossKind::kAbsoluteRegression:
      return std::abs(z - row.target);
    case LossKind::kHinge:
      return std::max(0.0, 1.0 - row.target * z);
    case LossKind::kFixedLinear:
      return z;
  }
  return 0.0;
}

double LossStream::offline_optimum_scalar(int grid_points) const {
  if (grid_points < 2) {
    throw InvalidConfig("LossStream: grid_points must be >= 2");
  }
  // Span the per-round scalar minimizers (regression: y_t / <a_t, e>).
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const Row& row : rows_) {
    if (row.feature_dot_e != 0.0) {
      const double c = row.target / row.feature_dot_e;
      lo = std::min(lo, c);
      hi = std::max(hi, c);
    }
  }
  if (!(lo <= hi)) {
    lo = -1.0;
    hi = 1.0;
  }
  double best_c = 0.0;
  double best_total = std::numeric_limits<double>::infinity();
  for (int k = 0; k < grid_points; ++k) {
    const double c =
        lo + (hi - lo) * static_cast<double>(k) / (grid_points - 1.0);
    double total = 0.0;
    for (std::int64_t t = 1; t <= rounds(); ++t) {
      total += loss_at_scalar(t, c);
    }
    if (total < best_total) {
      best_total = total;
      best_c = c;
    }
  }
  return best_c;
}

std::string to_string(LossKind kind) {
  switch (kind) {
    case LossKind::kAbsoluteRegression:
      return "absolute";
    case LossKind::kHinge:
      return "hinge";
    case LossKind::kFixedLinear:
      return "fixed_linear";
  }
  return "unknown";
}

LossKind loss_kind_from_string(const std::string& name) {
  if (name == "absolute") return LossKind::kAbsoluteRegression;
  if (name == "hinge") return LossKind::kHinge;
  if (name == "fixed_linear") return LossKind::kFixedLinear;
  throw UnknownLossSpec("unknown loss kind: " + name);
}

}  // namespace heavytail
