// Experiment configuration: the learner description, and the declarative
// config-file format binding learner + loss + noise + run settings.
//
// Config files are sectioned key = value text:
//
//   # comment
//   [learner]
//   algorithm = "heavy_tail_1d"     # sub_exp_1d | heavy_tail_1d | dimension_free
//   sigma = 1.0
//   T = 1000
//   ...
//   [noise]
//   kind = "pareto"
//   tail_index = 2.5
//   ...
//
// Values are numbers, booleans, quoted strings, or [v1, v2, ...] lists of
// numbers.  Unknown sections or keys are errors (InvalidConfig), as are
// malformed lines; every error message carries the line number.
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "heavytail/errors.hpp"
#include "heavytail/harness/loss.hpp"
#include "heavytail/harness/noise.hpp"

namespace heavytail {

enum class Algorithm {
  kSubExp1D,      // composite learner on bounded sub-exponential costs
  kHeavyTail1D,   // clipped learner, 1-D
  kDimensionFree, // magnitude x direction reduction
};

struct LearnerConfig {
  Algorithm algorithm = Algorithm::kHeavyTail1D;
  double sigma = 1.0;          // noise scale handed to the learner
  double b = 0.0;              // hard cost bound (sub_exp_1d only)
  double lipschitz = 1.0;      // G
  double moment_power = 2.0;   // p in (1, 2] for the heavy-tail algorithms
  double delta = 0.05;
  double epsilon = 1.0;
  std::int64_t horizon = 100;  // T
  std::int64_t dimension = 1;  // must be 1 unless dimension_free
  double tau = 0.0;            // heavy-tail clip override; 0 = default rule

  void validate() const;
};

// Run-level settings from the [run] section.
struct RunSettings {
  std::uint64_t master_seed = 0;
  std::vector<double> comparators;  // empty selects the default grid
  bool include_offline_optimum = true;
};

struct ExperimentConfig {
  LearnerConfig learner;
  LossSpec loss;
  NoiseSpec noise;
  RunSettings run;
};

// Parses a config file; throws InvalidConfig (bad/unknown keys, malformed
// lines, failed cross-validation) or IoError (unreadable file).
ExperimentConfig parse_config_file(const std::filesystem::path& path);

// Same grammar from an in-memory string (used by tests).
ExperimentConfig parse_config_text(const std::string& text);

// Canonical serialization (stable field order) used for config hashing.
std::string canonical_config_text(const ExperimentConfig& config);

std::string to_string(Algorithm algorithm);

}  // namespace heavytail
