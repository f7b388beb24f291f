#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hyperclust/pipeline.hpp"

namespace hyperclust {

// One dataset section of a benchmark manifest.
struct BenchEntry {
  std::string name;
  std::filesystem::path path;
  CsvOptions csv;
  RunConfig config;
  std::optional<double> target_ari;
  std::optional<double> target_nmi;
  std::optional<double> target_ari_assigned;
  std::optional<double> target_nmi_assigned;
  double band = 0.15;
  // Entries whose files are absent are reported as missing, not failed.
  bool optional = false;
};

// INI manifest: one [section] per dataset with keys path, header, label_col,
// minmax, center, h_mode, delta, repeats, seed, target_ari, target_nmi,
// target_ari_assigned, target_nmi_assigned, band, optional. Relative paths
// resolve against the manifest's directory. Throws DataError when malformed.
std::vector<BenchEntry> load_manifest(const std::filesystem::path& manifest);

struct BenchOutcome {
  std::string name;
  std::string status;  // ok, missing, error
  std::string message;
  std::optional<PipelineOutput> output;
  double seconds = 0.0;
  bool within_band = false;
};

BenchOutcome run_bench_entry(const BenchEntry& entry);

// Consolidated report with one record per entry.
nlohmann::json bench_report(const std::vector<BenchEntry>& entries, const std::vector<BenchOutcome>& outcomes);

}  // namespace hyperclust
