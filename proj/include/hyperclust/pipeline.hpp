#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hyperclust/connectivity.hpp"
#include "hyperclust/dataset.hpp"
#include "hyperclust/delta_search.hpp"
#include "hyperclust/forest.hpp"
#include "hyperclust/measure.hpp"
#include "hyperclust/metrics.hpp"

namespace hyperclust {

enum class HMode {
  // H = L', iterated to a fixed point.
  fixed_point,
  // H = L u (union of f_delta over the cells of L).
  experiment,
};

std::optional<HMode> parse_h_mode(std::string_view name);
const char* h_mode_name(HMode mode);
std::optional<MarginMode> parse_margin_mode(std::string_view name);
const char* margin_mode_name(MarginMode mode);

struct RunConfig {
  // Absent: choose delta from a sweep.
  std::optional<std::size_t> delta;
  HMode h_mode = HMode::experiment;
  std::size_t repeats = 5;
  std::uint64_t seed = 0;
  ForestOptions forest;
  MarginMode margin_mode = MarginMode::paper_literal;
  NmiNormalization nmi_norm = NmiNormalization::arithmetic;
  MetricMode metric_mode = MetricMode::full;
  PreprocessSteps preprocess;
  // Explicit sweep grid; otherwise grid_min..grid_max in grid_steps, with
  // unset bounds taken from default_grid.
  std::vector<std::size_t> grid;
  std::optional<std::size_t> grid_min;
  std::optional<std::size_t> grid_max;
  std::size_t grid_steps = 24;

  // Throws DataError when delta < 2 or repeats == 0.
  void validate() const;
};

// One clustering pass at a fixed delta and seed.
struct RunRecord {
  ClusterResult result;
  std::vector<ComponentStats> stats;
  std::size_t n_planes = 0;
  bool truncated = false;
  std::size_t degenerate_branches = 0;
};

RunRecord cluster_once(const Dataset& ds, std::size_t delta, std::uint64_t seed, const RunConfig& cfg);

// Seed of repeat r at a given delta.
std::uint64_t run_seed(std::uint64_t master, std::size_t delta, std::size_t repeat);

struct RepeatedRuns {
  std::vector<RunRecord> runs;
  std::size_t chosen = 0;
  const RunRecord& best() const { return runs[chosen]; }
};

// cfg.repeats passes at `delta`, best chosen by best_of.
RepeatedRuns run_repeats(const Dataset& ds, std::size_t delta, const RunConfig& cfg);

struct ScoredMetrics {
  double ari = 0.0;
  double nmi = 0.0;
};

struct Scores {
  ScoredMetrics full;
  // Absent when nothing was assigned.
  std::optional<ScoredMetrics> assigned_only;
};

Scores score(std::span<const int> truth, const ClusterResult& result, NmiNormalization norm);

struct PipelineOutput {
  Dataset dataset;  // after preprocessing
  std::size_t delta = 0;
  bool delta_auto = false;
  RepeatedRuns repeats;
  std::optional<Scores> scores;
  std::optional<SweepCurve> sweep;

  const ClusterResult& result() const { return repeats.best().result; }
  const std::vector<ComponentStats>& stats() const { return repeats.best().stats; }
};

// preprocess -> optional delta sweep -> best-of-repeats clustering -> scores.
PipelineOutput run_pipeline(const Dataset& raw, const RunConfig& cfg);

nlohmann::json config_json(const RunConfig& cfg);
nlohmann::json report_json(const PipelineOutput& out, const RunConfig& cfg);

// "point_index,cluster_id" with -1 for unassigned.
std::string assignments_csv(const ClusterResult& result);

}  // namespace hyperclust

