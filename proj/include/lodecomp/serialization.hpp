#pragma once

// JSON state files and decomposition reports.
//
// State file:
//   {"dims": [2,2,2], "amps": [[re, im], ...], "name": "...", "metadata": {...}}
// amps follow the row-major layout of StateTensor. Doubles are written in
// shortest round-trip form, so write-then-read is bit-exact.
//
// Report (schema_version 1): weights (descending), entropy, flags,
// per-branch vectors and per-subsystem support bases (lists of columns),
// and construction diagnostics.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "lodecomp/decomposition.hpp"
#include "lodecomp/maximal.hpp"
#include "lodecomp/state.hpp"

namespace lodecomp {

inline constexpr int kReportSchemaVersion = 1;

struct StateFile {
  StateTensor state;
  std::string name;
  nlohmann::json metadata = nlohmann::json::object();
};

nlohmann::json to_json(const StateFile& file);
StateFile state_file_from_json(const nlohmann::json& j);
/// Throws InvalidArgument on unreadable, unparsable, or invalid files.
StateFile read_state_file(const std::filesystem::path& path);
void write_state_file(const std::filesystem::path& path, const StateFile& file);

struct ReportDocument {
  int schema_version = kReportSchemaVersion;
  std::string name;
  std::vector<std::size_t> dims;
  std::vector<double> weights;
  double entropy_bits = 0.0;
  std::vector<Vector> vectors;                 // per branch
  std::vector<std::vector<Matrix>> supports;   // per branch, per subsystem
  Diagnostics diagnostics;
};

ReportDocument make_report(const std::string& name, const MaximalResult& result);
nlohmann::json to_json(const ReportDocument& report);
ReportDocument report_from_json(const nlohmann::json& j);
/// Rebuilds the claimed decomposition of `state` exactly as reported.
BranchDecomposition decomposition_from_report(const StateTensor& state,
                                              const ReportDocument& report);

nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace lodecomp
