// Command-line driver: multi-seed experiment runs, parameter sweeps, and
// concentration-envelope coverage checks.
//
//   heavytail run --config exp.cfg --seeds 50 --out results/ [--format csv]
//   heavytail sweep --config exp.cfg --vary T=1e2,1e3,1e4 --out sweep/
//   heavytail concentration-check --which scalar --runs 10000
//       --delta 0.05 --out cov/
//
//
// Exit codes: 0 success, 2 configuration error, 3 I/O error.  All output
// is deterministic given the invocation (HEAVYTAIL_THREADS only changes
// scheduling, never results), so repeated runs are byte-identical.
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "heavytail/errors.hpp"
#include "heavytail/harness/config.hpp"
#include "heavytail/harness/coverage.hpp"
#include "heavytail/harness/emit.hpp"
#include "heavytail/harness/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 2;
constexpr int kExitIoError = 3;

struct VarySpec {
  std::string key;
  std::vector<double> values;
};

// "--vary T=1e2,1e3,1e4" -> key "T", values {100, 1000, 10000}.
VarySpec parse_vary(const std::string& text) {
  const std::size_t eq = text.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 >= text.size()) {
    throw heavytail::InvalidConfig("sweep: --vary expects KEY=v1,v2,...");
  }
  VarySpec spec;
  spec.key = text.substr(0, eq);
  std::string rest = text.substr(eq + 1);
  std::size_t start = 0;
  while (start <= rest.size()) {
    const std::size_t comma = rest.find(',', start);
    const std::string token = rest.substr(
        start, comma == std::string::npos ? std::string::npos : comma - start);
    if (token.empty()) {
      throw heavytail::InvalidConfig("sweep: empty value in --vary list");
    }
    std::size_t consumed = 0;
    double value = 0.0;
    try {
      value = std::stod(token, &consumed);
    } catch (const std::exception&) {
      consumed = 0;
    }
    if (consumed != token.size()) {
      throw heavytail::InvalidConfig("sweep: malformed --vary value '" +
                                     token + "'");
    }
    spec.values.push_back(value);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (spec.values.empty()) {
    throw heavytail::InvalidConfig("sweep: --vary needs at least one value");
  }
  return spec;
}

std::int64_t as_positive_integer(const std::string& key, double value) {
  const double rounded = std::round(value);
  if (!(rounded >= 1.0) || std::abs(value - rounded) > 1e-9 * (1.0 + rounded)) {
    throw heavytail::InvalidConfig("sweep: " + key +
                                   " must be a positive integer");
  }
  return static_cast<std::int64_t>(rounded);
}

// Applies one swept value, keeping the cross-field couplings that config
// parsing establishes (loss dimension, noise moment power).
heavytail::ExperimentConfig apply_vary(heavytail::ExperimentConfig config,
                                       const std::string& key, double value) {
  using heavytail::Algorithm;
  if (key == "T") {
    config.learner.horizon = as_positive_integer(key, value);
  } else if (key == "sigma") {
    config.learner.sigma = value;
    config.noise.target_sigma = value;
  } else if (key == "b") {
    config.learner.b = value;
  } else if (key == "G") {
    config.learner.lipschitz = value;
    config.loss.lipschitz = value;
  } else if (key == "p") {
    config.learner.moment_power = value;
    if (config.learner.algorithm != Algorithm::kSubExp1D) {
      config.noise.moment_power = value;
    }
  } else if (key == "delta") {
    config.learner.delta = value;
  } else if (key == "epsilon") {
    config.learner.epsilon = value;
  } else if (key == "tau") {
    config.learner.tau = value;
  } else if (key == "dimension") {
    config.learner.dimension = as_positive_integer(key, value);
    config.loss.dimension = config.learner.dimension;
  } else {
    throw heavytail::InvalidConfig(
        "sweep: unknown --vary key '" + key +
        "' (expected T, sigma, b, G, p, delta, epsilon, tau, or dimension)");
  }
  return config;
}

std::string value_directory_name(const std::string& key, double value) {
  if (key == "T" || key == "dimension") {
    return key + "=" + std::to_string(static_cast<long long>(
                           as_positive_integer(key, value)));
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s=%g", key.c_str(), value);
  return buf;
}

int run_command(const std::string& config_path, std::int64_t seeds,
                const std::string& out_dir, const std::string& format) {
  const heavytail::ExperimentConfig config =
      heavytail::parse_config_file(config_path);
  const heavytail::ExperimentResult result =
      heavytail::run_experiment(config, seeds);
  const heavytail::EmittedFiles files = heavytail::emit(
      result, heavytail::emit_format_from_string(format), out_dir);

  std::cout << "wrote " << files.rows.string() << "\n";
  std::cout << "wrote " << files.comparators.string() << "\n";
  std::cout << "wrote " << files.summary.string() << "\n";
  for (const heavytail::ComparatorSummary& s : result.summary.comparators) {
    std::cout << s.label << " median=" << heavytail::format_double(s.median)
              << " quantile_high=" << heavytail::format_double(s.quantile_high)
              << " max=" << heavytail::format_double(s.max)
              << " envelope=" << heavytail::format_double(s.envelope)
              << " coverage=" << heavytail::format_double(s.coverage) << "\n";
  }
  return kExitOk;
}

int sweep_command(const std::string& config_path, const std::string& vary,
                  std::int64_t seeds, const std::string& out_dir,
                  const std::string& format) {
  const heavytail::ExperimentConfig base =
      heavytail::parse_config_file(config_path);
  const VarySpec spec = parse_vary(vary);

  std::string summary_text = "{\n  \"vary\": \"" + spec.key + "\",\n";
  summary_text += "  \"runs\": [\n";
  for (std::size_t i = 0; i < spec.values.size(); ++i) {
    const double value = spec.values[i];
    const heavytail::ExperimentConfig config =
        apply_vary(base, spec.key, value);
    const std::string leaf = value_directory_name(spec.key, value);
    const std::filesystem::path sub =
        std::filesystem::path(out_dir) / leaf;
    const heavytail::ExperimentResult result =
        heavytail::run_experiment(config, seeds);
    heavytail::emit(result, heavytail::emit_format_from_string(format), sub);
    std::cout << leaf << ":\n";
    for (const heavytail::ComparatorSummary& s : result.summary.comparators) {
      std::cout << "  " << s.label
                << " median=" << heavytail::format_double(s.median)
                << " quantile_high="
                << heavytail::format_double(s.quantile_high) << "\n";
    }

    summary_text += "    {\"value\": " + heavytail::format_double(value) +
                    ", \"dir\": \"" + leaf + "\", \"comparators\": [";
    const auto& rows = result.summary.comparators;
    for (std::size_t j = 0; j < rows.size(); ++j) {
      if (j > 0) summary_text += ", ";
      summary_text += "{\"label\": \"" + rows[j].label + "\", \"median\": " +
                      heavytail::format_double(rows[j].median) +
                      ", \"quantile_high\": " +
                      heavytail::format_double(rows[j].quantile_high) +
                      ", \"max\": " + heavytail::format_double(rows[j].max) +
                      "}";
    }
    summary_text += "]}";
    summary_text += (i + 1 < spec.values.size()) ? ",\n" : "\n";
  }
  summary_text += "  ]\n}\n";

  const std::filesystem::path summary_path =
      std::filesystem::path(out_dir) / "sweep_summary.json";
  std::ofstream out(summary_path, std::ios::binary);
  if (!out) {
    throw heavytail::IoError("sweep: cannot open " + summary_path.string());
  }
  out << summary_text;
  out.flush();
  if (!out.good()) {
    throw heavytail::IoError("sweep: write failed for " +
                             summary_path.string());
  }
  std::cout << "wrote " << summary_path.string() << "\n";
  return kExitOk;
}

int concentration_command(const std::string& which, std::int64_t runs,
                          double delta, std::int64_t horizon,
                          std::uint64_t seed, const std::string& out_dir) {
  heavytail::CoverageSpec spec;
  spec.which = heavytail::coverage_kind_from_string(which);
  spec.runs = runs;
  spec.delta = delta;
  spec.horizon = horizon;
  spec.master_seed = seed;
  const heavytail::CoverageResult result = heavytail::run_coverage(spec);

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    throw heavytail::IoError("concentration-check: cannot create " + out_dir +
                             ": " + ec.message());
  }
  const std::filesystem::path path =
      std::filesystem::path(out_dir) / "coverage.json";
  std::string text = "{\n";
  text += "  \"which\": \"" + which + "\",\n";
  text += "  \"runs\": " + std::to_string(result.runs) + ",\n";
  text += "  \"horizon\": " + std::to_string(horizon) + ",\n";
  text += "  \"delta\": " + heavytail::format_double(delta) + ",\n";
  text += "  \"covered\": " + std::to_string(result.covered) + ",\n";
  text += "  \"fraction\": " + heavytail::format_double(result.fraction) +
          ",\n";
  text += "  \"wilson_low\": " + heavytail::format_double(result.wilson_low) +
          ",\n";
  text +=
      "  \"wilson_high\": " + heavytail::format_double(result.wilson_high) +
      ",\n";
  text += "  \"target\": " + heavytail::format_double(result.target) + ",\n";
  text += std::string("  \"ci_above_target\": ") +
          (result.wilson_low >= result.target ? "true" : "false") + "\n";
  text += "}\n";
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw heavytail::IoError("concentration-check: cannot open " +
                             path.string());
  }
  out << text;
  out.flush();
  if (!out.good()) {
    throw heavytail::IoError("concentration-check: write failed for " +
                             path.string());
  }

  std::cout << which << " coverage " << heavytail::format_double(
                   result.fraction)
            << " (target " << heavytail::format_double(result.target)
            << ", 99% CI [" << heavytail::format_double(result.wilson_low)
            << ", " << heavytail::format_double(result.wilson_high) << "])\n";
  std::cout << "wrote " << path.string() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Parameter-free online learning under heavy-tailed gradient noise: "
      "experiment runner and envelope checks"};
  app.require_subcommand(1);

  std::string run_config;
  std::int64_t run_seeds = 20;
  std::string run_out;
  std::string run_format = "csv";
  CLI::App* run = app.add_subcommand("run", "Run one experiment config");
  run->add_option("--config", run_config, "Experiment config file")
      ->required();
  run->add_option("--seeds", run_seeds, "Number of seeds (default 20)");
  run->add_option("--out", run_out, "Output directory")->required();
  run->add_option("--format", run_format, "csv or jsonl (default csv)")
      ->check(CLI::IsMember({"csv", "jsonl"}));

  std::string sweep_config;
  std::string sweep_vary;
  std::int64_t sweep_seeds = 20;
  std::string sweep_out;
  std::string sweep_format = "csv";
  CLI::App* sweep =
      app.add_subcommand("sweep", "Run a config across parameter values");
  sweep->add_option("--config", sweep_config, "Experiment config file")
      ->required();
  sweep->add_option("--vary", sweep_vary,
                    "KEY=v1,v2,... (T, sigma, b, G, p, delta, epsilon, tau, "
                    "dimension)")
      ->required();
  sweep->add_option("--seeds", sweep_seeds, "Seeds per value (default 20)");
  sweep->add_option("--out", sweep_out, "Output directory")->required();
  sweep->add_option("--format", sweep_format, "csv or jsonl (default csv)")
      ->check(CLI::IsMember({"csv", "jsonl"}));

  std::string cc_which;
  std::int64_t cc_runs = 10000;
  double cc_delta = 0.05;
  std::int64_t cc_horizon = 200;
  std::uint64_t cc_seed = 0;
  std::string cc_out;
  CLI::App* cc = app.add_subcommand(
      "concentration-check", "Monte-Carlo coverage of an envelope");
  cc->add_option("--which", cc_which, "scalar, vector, or squares")
      ->required()
      ->check(CLI::IsMember({"scalar", "vector", "squares"}));
  cc->add_option("--runs", cc_runs, "Simulated paths (default 10000)");
  cc->add_option("--delta", cc_delta, "Envelope confidence (default 0.05)");
  cc->add_option("--horizon", cc_horizon, "Rounds per path (default 200)");
  cc->add_option("--seed", cc_seed, "Master seed (default 0)");
  cc->add_option("--out", cc_out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfigError;
  }

  try {
    if (run->parsed()) {
      return run_command(run_config, run_seeds, run_out, run_format);
    }
    if (sweep->parsed()) {
      return sweep_command(sweep_config, sweep_vary, sweep_seeds, sweep_out,
                           sweep_format);
    }
    return concentration_command(cc_which, cc_runs, cc_delta, cc_horizon,
                                 cc_seed, cc_out);
  } catch (const heavytail::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIoError;
  } catch (const heavytail::Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
}
