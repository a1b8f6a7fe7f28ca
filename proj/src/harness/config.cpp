#include "heavytail/harness/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace heavytail {
namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

[[noreturn]] void fail(int line, const std::string& message) {
  throw InvalidConfig("config line " + std::to_string(line) + ": " + message);
}

// One parsed value; exactly one accessor is legal per key.
struct Value {
  std::string raw;
  int line = 0;

  double as_number() const {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(raw, &used);
    } catch (const std::exception&) {
      fail(line, "expected a number, got '" + raw + "'");
    }
    if (used != raw.size()) fail(line, "trailing characters in number '" + raw + "'");
    return v;
  }

  std::int64_t as_integer() const {
    const double v = as_number();
    const double r = std::round(v);
    if (std::abs(v - r) > 1e-9 * std::max(1.0, std::abs(v))) {
      fail(line, "expected an integer, got '" + raw + "'");
    }
    return static_cast<std::int64_t>(r);
  }

  bool as_bool() const {
    if (raw == "true") return true;
    if (raw == "false") return false;
    fail(line, "expected true/false, got '" + raw + "'");
  }

  std::string as_string() const {
    if (raw.size() >= 2 && raw.front() == '"' && raw.back() == '"') {
      return raw.substr(1, raw.size() - 2);
    }
    fail(line, "expected a quoted string, got '" + raw + "'");
  }

  std::vector<double> as_number_list() const {
    if (raw.size() < 2 || raw.front() != '[' || raw.back() != ']') {
      fail(line, "expected [v1, v2, ...], got '" + raw + "'");
    }
    std::vector<double> out;
    std::string body = raw.substr(1, raw.size() - 2);
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (item.empty()) fail(line, "empty list element");
      Value v{item, line};
      out.push_back(v.as_number());
    }
    return out;
  }
};

Algorithm algorithm_from_string(const std::string& name, int line) {
  if (name == "sub_exp_1d") return Algorithm::kSubExp1D;
  if (name == "heavy_tail_1d") return Algorithm::kHeavyTail1D;
  if (name == "dimension_free") return Algorithm::kDimensionFree;
  fail(line, "unknown algorithm '" + name + "'");
}

NoiseKind noise_kind_from_string(const std::string& name, int line) {
  if (name == "none") return NoiseKind::kNone;
  if (name == "pareto") return NoiseKind::kSymmetricPareto;
  if (name == "student_t") return NoiseKind::kStudentT;
  if (name == "bounded_uniform") return NoiseKind::kBoundedUniform;
  fail(line, "unknown noise kind '" + name + "'");
}

}  // namespace

void LearnerConfig::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw InvalidConfig("LearnerConfig: sigma must be positive");
  }
  if (!(lipschitz > 0.0) || !std::isfinite(lipschitz)) {
    throw InvalidConfig("LearnerConfig: lipschitz must be positive");
  }
  if (!(delta > 0.0) || !(delta < 1.0)) {
    throw InvalidConfig("LearnerConfig: delta must be in (0, 1)");
  }
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw InvalidConfig("LearnerConfig: epsilon must be positive");
  }
  if (horizon < 3) {
    throw InvalidConfig("LearnerConfig: horizon must be >= 3");
  }
  if (dimension < 1) {
    throw InvalidConfig("LearnerConfig: dimension must be >= 1");
  }
  if (algorithm != Algorithm::kDimensionFree && dimension != 1) {
    throw InvalidConfig("LearnerConfig: dimension must be 1 for 1-D algorithms");
  }
  if (algorithm == Algorithm::kSubExp1D) {
    if (!(b > 0.0) || !std::isfinite(b)) {
      throw InvalidConfig("LearnerConfig: sub_exp_1d requires b > 0");
    }
  } else {
    if (!(moment_power > 1.0) || !(moment_power <= 2.0)) {
      throw InvalidConfig("LearnerConfig: moment_power must be in (1, 2]");
    }
  }
  if (!(tau >= 0.0) || !std::isfinite(tau)) {
    throw InvalidConfig("LearnerConfig: tau must be finite and >= 0");
  }
}

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig config;
  std::istringstream in(text);
  std::string raw_line;
  std::string section;
  int line_no = 0;

  while (std::getline(in, raw_line)) {
    ++line_no;
    std::string line = raw_line;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') fail(line_no, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "learner" && section != "loss" && section != "noise" &&
          section != "run") {
        fail(line_no, "unknown section [" + section + "]");
      }
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) fail(line_no, "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const Value value{trim(line.substr(eq + 1)), line_no};
    if (key.empty()) fail(line_no, "empty key");
    if (section.empty()) fail(line_no, "key outside any [section]");

    if (section == "learner") {
      if (key == "algorithm") {
        config.learner.algorithm =
            algorithm_from_string(value.as_string(), line_no);
      } else if (key == "sigma") {
        config.learner.sigma = value.as_number();
      } else if (key == "b") {
        config.learner.b = value.as_number();
      } else if (key == "G") {
        config.learner.lipschitz = value.as_number();
      } else if (key == "p") {
        config.learner.moment_power = value.as_number();
      } else if (key == "delta") {
        config.learner.delta = value.as_number();
      } else if (key == "epsilon") {
        config.learner.epsilon = value.as_number();
      } else if (key == "T") {
        config.learner.horizon = value.as_integer();
      } else if (key == "dimension") {
        config.learner.dimension = value.as_integer();
      } else if (key == "tau") {
        config.learner.tau = value.as_number();
      } else {
        fail(line_no, "unknown key '" + key + "' in [learner]");
      }
    } else if (section == "loss") {
      if (key == "kind") {
        try {
          config.loss.kind = loss_kind_from_string(value.as_string());
        } catch (const UnknownLossSpec& e) {
          fail(line_no, e.what());
        }
      } else if (key == "G") {
        config.loss.lipschitz = value.as_number();
      } else if (key == "target") {
        config.loss.target = value.as_number();
      } else if (key == "label_noise") {
        config.loss.label_noise = value.as_number();
      } else if (key == "coefficient") {
        config.loss.coefficient = value.as_number();
      } else if (key == "random_sign") {
        config.loss.random_sign = value.as_bool();
      } else {
        fail(line_no, "unknown key '" + key + "' in [loss]");
      }
    } else if (section == "noise") {
      if (key == "kind") {
        config.noise.kind = noise_kind_from_string(value.as_string(), line_no);
      } else if (key == "sigma") {
        config.noise.target_sigma = value.as_number();
      } else if (key == "tail_index") {
        config.noise.tail_index = value.as_number();
      } else if (key == "dof") {
        config.noise.dof = value.as_number();
      } else {
        fail(line_no, "unknown key '" + key + "' in [noise]");
      }
    } else {  // run
      if (key == "master_seed") {
        config.run.master_seed =
            static_cast<std::uint64_t>(value.as_integer());
      } else if (key == "comparators") {
        config.run.comparators = value.as_number_list();
      } else if (key == "include_offline_optimum") {
        config.run.include_offline_optimum = value.as_bool();
      } else {
        fail(line_no, "unknown key '" + key + "' in [run]");
      }
    }
  }

  // Mirror the learner's scales into the dependent specs and validate.
  config.loss.dimension = config.learner.dimension;
  config.noise.moment_power =
      config.learner.algorithm == Algorithm::kSubExp1D
          ? 2.0
          : config.learner.moment_power;
  config.learner.validate();
  config.loss.validate();
  return config;
}

ExperimentConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot read config file: " + path.string());
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

std::string canonical_config_text(const ExperimentConfig& config) {
  std::ostringstream out;
  out.precision(17);
  out << "[learner]\n"
      << "algorithm = \"" << to_string(config.learner.algorithm) << "\"\n"
      << "sigma = " << config.learner.sigma << "\n"
      << "b = " << config.learner.b << "\n"
      << "G = " << config.learner.lipschitz << "\n"
      << "p = " << config.learner.moment_power << "\n"
      << "delta = " << config.learner.delta << "\n"
      << "epsilon = " << config.learner.epsilon << "\n"
      << "T = " << config.learner.horizon << "\n"
      << "dimension = " << config.learner.dimension << "\n"
      << "tau = " << config.learner.tau << "\n"
      << "[loss]\n"
      << "kind = \"" << to_string(config.loss.kind) << "\"\n"
      << "G = " << config.loss.lipschitz << "\n"
      << "target = " << config.loss.target << "\n"
      << "label_noise = " << config.loss.label_noise << "\n"
      << "coefficient = " << config.loss.coefficient << "\n"
      << "random_sign = " << (config.loss.random_sign ? "true" : "false")
      << "\n"
      << "[noise]\n"
      << "kind = \"" << to_string(config.noise.kind) << "\"\n"
      << "sigma = " << config.noise.target_sigma << "\n"
      << "tail_index = " << config.noise.tail_index << "\n"
      << "dof = " << config.noise.dof << "\n"
      << "[run]\n"
      << "master_seed = " << config.run.master_seed << "\n"
      << "comparators = [";
  for (std::size_t i = 0; i < config.run.comparators.size(); ++i) {
    if (i) out << ", ";
    out << config.run.comparators[i];
  }
  out << "]\n"
      << "include_offline_optimum = "
      << (config.run.include_offline_optimum ? "true" : "false") << "\n";
  return out.str();
}

std::string to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kSubExp1D:
      return "sub_exp_1d";
    case Algorithm::kHeavyTail1D:
      return "heavy_tail_1d";
    case Algorithm::kDimensionFree:
      return "dimension_free";
  }
  return "unknown";
}

}  // namespace heavytail
