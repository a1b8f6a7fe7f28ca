#include "heavytail/harness/emit.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace heavytail {
namespace {

using nlohmann::json;

// Rows and summary are assembled by hand so every float goes through
// format_double (json libraries pick their own shortest representation).
void append_double(std::string& out, double x) { out += format_double(x); }

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("emit: cannot open " + path.string() + " for writing");
  }
  return out;
}

void finish_write(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out.good()) {
    throw IoError("emit: write failed for " + path.string());
  }
}

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out;
}

// Comparator values may be NaN (data-driven "u=opt"); JSON has no NaN, so
// those serialize as null and parse back to NaN.
std::string json_number_or_null(double x) {
  return std::isnan(x) ? "null" : format_double(x);
}

void write_rows_csv(std::ofstream& out, const ExperimentResult& result) {
  std::string header = "t,seed,iterate_norm,loss,grad_norm,clipped";
  for (std::size_t j = 0; j < result.comparators.size(); ++j) {
    header += ",regret_u" + std::to_string(j);
  }
  out << header << "\n";
  for (const RegretTrace& trace : result.traces) {
    for (const TraceRow& row : trace.rows) {
      std::string line = std::to_string(row.round);
      line += ',';
      line += std::to_string(trace.seed);
      line += ',';
      append_double(line, row.iterate_norm);
      line += ',';
      append_double(line, row.loss);
      line += ',';
      append_double(line, row.grad_norm);
      line += ',';
      line += row.clipped ? '1' : '0';
      for (double r : row.regret) {
        line += ',';
        append_double(line, r);
      }
      out << line << "\n";
    }
  }
}

void write_rows_jsonl(std::ofstream& out, const ExperimentResult& result) {
  for (const RegretTrace& trace : result.traces) {
    for (const TraceRow& row : trace.rows) {
      std::string line = "{\"t\":" + std::to_string(row.round);
      line += ",\"seed\":" + std::to_string(trace.seed);
      line += ",\"iterate_norm\":";
      append_double(line, row.iterate_norm);
      line += ",\"loss\":";
      append_double(line, row.loss);
      line += ",\"grad_norm\":";
      append_double(line, row.grad_norm);
      line += ",\"clipped\":";
      line += row.clipped ? "true" : "false";
      line += ",\"regret\":[";
      for (std::size_t j = 0; j < row.regret.size(); ++j) {
        if (j > 0) line += ',';
        append_double(line, row.regret[j]);
      }
      line += "]}";
      out << line << "\n";
    }
  }
}

void write_sidecar(std::ofstream& out, const ExperimentResult& result) {
  std::string text = "{\n  \"columns\": [";
  for (std::size_t j = 0; j < result.comparators.size(); ++j) {
    if (j > 0) text += ", ";
    text += "\"regret_u" + std::to_string(j) + "\"";
  }
  text += "],\n  \"comparators\": [\n";
  for (std::size_t j = 0; j < result.comparators.size(); ++j) {
    text += "    {\"label\": \"" + json_escape(result.comparators[j].label) +
            "\", \"value\": " +
            json_number_or_null(result.comparators[j].value) + "}";
    text += (j + 1 < result.comparators.size()) ? ",\n" : "\n";
  }
  text += "  ],\n";
  text += "  \"config_hash\": " + std::to_string(result.config_hash) + ",\n";
  text += "  \"master_seed\": " + std::to_string(result.master_seed) + ",\n";
  text += "  \"seeds\": " + std::to_string(result.traces.size()) + ",\n";
  text += "  \"rounds\": " + std::to_string(result.summary.rounds) + "\n";
  text += "}\n";
  out << text;
}

void write_summary(std::ofstream& out, const ExperimentResult& result) {
  std::string text = "{\n";
  text += "  \"seeds\": " + std::to_string(result.summary.seeds) + ",\n";
  text += "  \"rounds\": " + std::to_string(result.summary.rounds) + ",\n";
  text += "  \"config_hash\": " + std::to_string(result.config_hash) + ",\n";
  text += "  \"comparators\": [\n";
  const auto& rows = result.summary.comparators;
  for (std::size_t j = 0; j < rows.size(); ++j) {
    const ComparatorSummary& s = rows[j];
    text += "    {\"label\": \"" + json_escape(s.label) + "\"";
    text += ", \"value\": " + json_number_or_null(s.value);
    text += ", \"median\": " + format_double(s.median);
    text += ", \"quantile_high\": " + format_double(s.quantile_high);
    text += ", \"max\": " + format_double(s.max);
    text += ", \"envelope\": " + json_number_or_null(s.envelope);
    text += ", \"coverage\": " + json_number_or_null(s.coverage);
    text += "}";
    text += (j + 1 < rows.size()) ? ",\n" : "\n";
  }
  text += "  ]\n}\n";
  out << text;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  return fields;
}

double parse_double_field(const std::string& field) {
  std::size_t consumed = 0;
  double x = 0.0;
  try {
    x = std::stod(field, &consumed);
  } catch (const std::exception&) {
    throw InvalidConfig("parse_emitted: malformed number '" + field + "'");
  }
  if (consumed != field.size()) {
    throw InvalidConfig("parse_emitted: malformed number '" + field + "'");
  }
  return x;
}

std::int64_t parse_integer_field(const std::string& field) {
  std::size_t consumed = 0;
  long long x = 0;
  try {
    x = std::stoll(field, &consumed);
  } catch (const std::exception&) {
    throw InvalidConfig("parse_emitted: malformed integer '" + field + "'");
  }
  if (consumed != field.size()) {
    throw InvalidConfig("parse_emitted: malformed integer '" + field + "'");
  }
  return static_cast<std::int64_t>(x);
}

// Appends a row to the trace for `seed`, opening a new trace whenever the
// seed changes (rows are emitted grouped by seed in seed order).
void push_row(std::vector<RegretTrace>& traces, std::int64_t seed,
              TraceRow row) {
  if (traces.empty() || traces.back().seed != seed) {
    RegretTrace trace;
    trace.seed = seed;
    traces.push_back(std::move(trace));
  }
  traces.back().rows.push_back(std::move(row));
}

void parse_rows_csv(std::ifstream& in, ParsedEmission& out) {
  std::string line;
  if (!std::getline(in, line)) {
    throw InvalidConfig("parse_emitted: missing CSV header");
  }
  const std::vector<std::string> header = split_csv_line(line);
  if (header.size() < 6 || header[0] != "t" || header[1] != "seed") {
    throw InvalidConfig("parse_emitted: unexpected CSV header '" + line + "'");
  }
  const std::size_t num_comparators = header.size() - 6;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw InvalidConfig("parse_emitted: row width mismatch in '" + line +
                          "'");
    }
    TraceRow row;
    row.round = parse_integer_field(fields[0]);
    const std::int64_t seed = parse_integer_field(fields[1]);
    row.iterate_norm = parse_double_field(fields[2]);
    row.loss = parse_double_field(fields[3]);
    row.grad_norm = parse_double_field(fields[4]);
    row.clipped = fields[5] == "1";
    row.regret.reserve(num_comparators);
    for (std::size_t j = 0; j < num_comparators; ++j) {
      row.regret.push_back(parse_double_field(fields[6 + j]));
    }
    push_row(out.traces, seed, std::move(row));
  }
}

void parse_rows_jsonl(std::ifstream& in, ParsedEmission& out) {
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::exception& e) {
      throw InvalidConfig(std::string("parse_emitted: bad JSONL line: ") +
                          e.what());
    }
    TraceRow row;
    row.round = obj.at("t").get<std::int64_t>();
    const std::int64_t seed = obj.at("seed").get<std::int64_t>();
    row.iterate_norm = obj.at("iterate_norm").get<double>();
    row.loss = obj.at("loss").get<double>();
    row.grad_norm = obj.at("grad_norm").get<double>();
    row.clipped = obj.at("clipped").get<bool>();
    row.regret = obj.at("regret").get<std::vector<double>>();
    push_row(out.traces, seed, std::move(row));
  }
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string to_string(EmitFormat format) {
  return format == EmitFormat::kCsv ? "csv" : "jsonl";
}

EmitFormat emit_format_from_string(const std::string& name) {
  if (name == "csv") return EmitFormat::kCsv;
  if (name == "jsonl") return EmitFormat::kJsonl;
  throw InvalidConfig("unknown emit format '" + name +
                      "' (expected csv or jsonl)");
}

EmittedFiles emit(const ExperimentResult& result, EmitFormat format,
                  const std::filesystem::path& out_dir) {
  for (const RegretTrace& trace : result.traces) {
    for (const TraceRow& row : trace.rows) {
      if (row.regret.size() != result.comparators.size()) {
        throw InvalidConfig(
            "emit: trace regret width does not match the comparator list");
      }
    }
  }

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    throw IoError("emit: cannot create " + out_dir.string() + ": " +
                  ec.message());
  }

  EmittedFiles files;
  files.rows =
      out_dir / (format == EmitFormat::kCsv ? "trace.csv" : "trace.jsonl");
  files.comparators = out_dir / "comparators.json";
  files.summary = out_dir / "summary.json";

  {
    std::ofstream out = open_for_write(files.rows);
    if (format == EmitFormat::kCsv) {
      write_rows_csv(out, result);
    } else {
      write_rows_jsonl(out, result);
    }
    finish_write(out, files.rows);
  }
  {
    std::ofstream out = open_for_write(files.comparators);
    write_sidecar(out, result);
    finish_write(out, files.comparators);
  }
  {
    std::ofstream out = open_for_write(files.summary);
    write_summary(out, result);
    finish_write(out, files.summary);
  }
  return files;
}

ParsedEmission parse_emitted(const std::filesystem::path& rows_path) {
  std::ifstream in(rows_path, std::ios::binary);
  if (!in) {
    throw IoError("parse_emitted: cannot open " + rows_path.string());
  }

  ParsedEmission out;
  if (rows_path.extension() == ".jsonl") {
    parse_rows_jsonl(in, out);
  } else {
    parse_rows_csv(in, out);
  }

  const std::filesystem::path sidecar =
      rows_path.parent_path() / "comparators.json";
  std::ifstream side(sidecar, std::ios::binary);
  if (!side) {
    throw IoError("parse_emitted: cannot open sidecar " + sidecar.string());
  }
  json meta;
  try {
    meta = json::parse(side);
  } catch (const json::exception& e) {
    throw InvalidConfig(std::string("parse_emitted: bad sidecar: ") +
                        e.what());
  }
  for (const json& c : meta.at("comparators")) {
    Comparator comp;
    comp.label = c.at("label").get<std::string>();
    comp.value = c.at("value").is_null()
                     ? std::numeric_limits<double>::quiet_NaN()
                     : c.at("value").get<double>();
    out.comparators.push_back(std::move(comp));
  }
  out.config_hash = meta.at("config_hash").get<std::uint64_t>();
  out.master_seed = meta.at("master_seed").get<std::uint64_t>();
  for (RegretTrace& trace : out.traces) trace.config_hash = out.config_hash;
  return out;
}

}  // namespace heavytail
