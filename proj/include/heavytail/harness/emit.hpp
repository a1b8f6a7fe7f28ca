// Trace serialization: CSV or JSONL rows plus a JSON sidecar binding the
// regret columns to comparator labels.
//
// CSV schema:
//
//   t,seed,iterate_norm,loss,grad_norm,clipped,regret_u0,regret_u1,...
//
// with one `regret_uK` column per comparator (labels live in the sidecar
// `comparators.json`).  JSONL mirrors the same rows as one object per
// line.  All floats are serialized with 17 significant digits, so parsing
// an emitted file restores every double bit-exactly; wall time is never
// emitted.
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "heavytail/harness/experiment.hpp"

namespace heavytail {

enum class EmitFormat { kCsv, kJsonl };

struct EmittedFiles {
  std::filesystem::path rows;         // trace.csv or trace.jsonl
  std::filesystem::path comparators;  // comparators.json sidecar
  std::filesystem::path summary;      // summary.json
};

// Writes rows + sidecar + summary under out_dir (created if missing).
// Failures to create or write any file throw IoError.
EmittedFiles emit(const ExperimentResult& result, EmitFormat format,
                  const std::filesystem::path& out_dir);

// Rows plus sidecar read back; wall times are zero (never serialized).
struct ParsedEmission {
  std::vector<Comparator> comparators;
  std::vector<RegretTrace> traces;
  std::uint64_t config_hash = 0;
  std::uint64_t master_seed = 0;
};

// Reads an emitted rows file (format inferred from the extension) and the
// comparators.json sidecar next to it.  Throws IoError on unreadable
// files and InvalidConfig on rows that do not match the schema.
ParsedEmission parse_emitted(const std::filesystem::path& rows_path);

// %.17g — the shared float-to-text rule for every emitted file.
std::string format_double(double x);

std::string to_string(EmitFormat format);
EmitFormat emit_format_from_string(const std::string& name);

}  // namespace heavytail
