#include "hyperclust/pipeline.hpp"

#include <fmt/format.h>

namespace hyperclust {

std::optional<HMode> parse_h_mode(std::string_view name) {
  if (name == "fixed_point" || name == "fixed-point") return HMode::fixed_point;
  if (name == "experiment") return HMode::experiment;
  return std::nullopt;
}

const char* h_mode_name(HMode mode) { return mode == HMode::fixed_point ? "fixed_point" : "experiment"; }

std::optional<MarginMode> parse_margin_mode(std::string_view name) {
  if (name == "paper" || name == "paper_literal" || name == "literal") return MarginMode::paper_literal;
  if (name == "canonical") return MarginMode::canonical;
  return std::nullopt;
}

const char* margin_mode_name(MarginMode mode) { return mode == MarginMode::paper_literal ? "paper_literal" : "canonical"; }

void RunConfig::validate() const {
  if (delta && *delta < 2) throw DataError(fmt::format("delta must be >= 2, got {}", *delta));
  if (repeats == 0) throw DataError("repeats must be >= 1");
  for (std::size_t g : grid)
    if (g < 2) throw DataError(fmt::format("grid delta must be >= 2, got {}", g));
}

std::uint64_t run_seed(std::uint64_t master, std::size_t delta, std::size_t repeat) {
  return derive_seed(master, {delta, repeat});
}

RunRecord cluster_once(const Dataset& ds, std::size_t delta, std::uint64_t seed, const RunConfig& cfg) {
  ForestBuilder builder(ds, cfg.forest);
  const HyperplaneSet planes =
      cfg.h_mode == HMode::fixed_point ? builder.fixed_point_l_prime(delta, seed) : builder.experiment_h(delta, seed);

  AffinityGraph graph = build_affinity(ds, planes, cfg.margin_mode);
  const Matrix dist = embedding_distances(embed(ds, planes));
  geodesic_distances(graph, dist);

  RunRecord record;
  record.stats = component_stats(graph, dist, delta);
  record.result = grow_clusters(record.stats, select_centers(record.stats), ds.size());
  record.result.delta = delta;
  record.result.seed = seed;
  record.n_planes = planes.size();
  record.truncated = planes.truncated;
  record.degenerate_branches = builder.degenerate_branches();
  return record;
}

RepeatedRuns run_repeats(const Dataset& ds, std::size_t delta, const RunConfig& cfg) {
  RepeatedRuns out;
  std::vector<ClusterResult> results;
  for (std::size_t r = 0; r < cfg.repeats; ++r) {
    out.runs.push_back(cluster_once(ds, delta, run_seed(cfg.seed, delta, r), cfg));
    results.push_back(out.runs.back().result);
  }
  out.chosen = best_of_index(results);
  return out;
}

Scores score(std::span<const int> truth, const ClusterResult& result, NmiNormalization norm) {
  Scores s;
  const auto [t, p] = restrict_assigned(truth, result.assignment, MetricMode::full);
  s.full = {ari(t, p), nmi(t, p, norm)};
  if (result.n_assigned > 0) {
    const auto [ta, pa] = restrict_assigned(truth, result.assignment, MetricMode::assigned_only);
    s.assigned_only = ScoredMetrics{ari(ta, pa), nmi(ta, pa, norm)};
  }
  return s;
}

PipelineOutput run_pipeline(const Dataset& raw, const RunConfig& cfg) {
  cfg.validate();
  PipelineOutput out;
  out.dataset = preprocess(raw, cfg.preprocess);
  const Dataset& ds = out.dataset;

  if (cfg.delta) {
    out.delta = *cfg.delta;
  } else {
    std::vector<std::size_t> grid = cfg.grid;
    if (grid.empty()) {
      const auto fallback = default_grid(ds.size(), cfg.grid_steps);
      grid = linear_grid(cfg.grid_min.value_or(fallback.front()), cfg.grid_max.value_or(fallback.back()), cfg.grid_steps);
    }
    out.sweep = sweep(ds, grid, cfg);
    out.delta = out.sweep->selected_delta;
    out.delta_auto = true;
  }
  out.repeats = run_repeats(ds, out.delta, cfg);
  if (ds.truth_labels) out.scores = score(*ds.truth_labels, out.result(), cfg.nmi_norm);
  return out;
}

nlohmann::json config_json(const RunConfig& cfg) {
  nlohmann::json j;
  j["delta"] = cfg.delta ? nlohmann::json(*cfg.delta) : nlohmann::json(nullptr);
  j["h_mode"] = h_mode_name(cfg.h_mode);
  j["repeats"] = cfg.repeats;
  j["seed"] = cfg.seed;
  j["svm_c"] = cfg.forest.svm.c;
  j["svm_tol"] = cfg.forest.svm.tol;
  j["kmeans_tol"] = cfg.forest.kmeans.tol;
  j["kmeans_max_iter"] = cfg.forest.kmeans.max_iter;
  j["max_rounds"] = cfg.forest.max_rounds;
  j["margin_mode"] = margin_mode_name(cfg.margin_mode);
  j["nmi_normalization"] = cfg.nmi_norm == NmiNormalization::arithmetic ? "arithmetic" : "geometric";
  j["metric_mode"] = metric_mode_name(cfg.metric_mode);
  j["minmax"] = cfg.preprocess.minmax;
  j["center"] = cfg.preprocess.center;
  return j;
}

nlohmann::json report_json(const PipelineOutput& out, const RunConfig& cfg) {
  using nlohmann::json;
  const Dataset& ds = out.dataset;
  json report;
  report["dataset"] = {{"source", ds.provenance.source},
                       {"hash", fmt::format("{:016x}", dataset_hash(ds))},
                       {"n", ds.size()},
                       {"d", ds.dims()},
                       {"normalized", ds.provenance.normalized},
                       {"centered", ds.provenance.centered}};
  report["config"] = config_json(cfg);
  report["delta"] = out.delta;
  report["delta_auto"] = out.delta_auto;

  json runs = json::array();
  for (const auto& r : out.repeats.runs)
    runs.push_back({{"seed", r.result.seed},
                    {"n_assigned", r.result.n_assigned},
                    {"n_components", r.stats.size()},
                    {"n_centers", r.result.centers.size()},
                    {"n_planes", r.n_planes},
                    {"truncated", r.truncated},
                    {"degenerate_branches", r.degenerate_branches}});
  report["runs"] = runs;
  report["chosen_run"] = out.repeats.chosen;

  const ClusterResult& result = out.result();
  report["n_assigned"] = result.n_assigned;
  report["n_clusters"] = result.centers.size();
  report["centers"] = result.centers;

  json comps = json::array();
  for (const auto& s : out.stats())
    comps.push_back({{"id", s.id},
                     {"size", s.members.size()},
                     {"intra_dis", s.intra_dis},
                     {"inter_dis", s.inter_dis},
                     {"m", s.m_value},
                     {"role", role_name(s.role)},
                     {"neighbors", s.neighbors}});
  report["components"] = comps;

  if (out.scores) {
    json metrics;
    metrics["mode"] = metric_mode_name(cfg.metric_mode);
    metrics["full"] = {{"ari", out.scores->full.ari}, {"nmi", out.scores->full.nmi}};
    if (out.scores->assigned_only)
      metrics["assigned_only"] = {{"ari", out.scores->assigned_only->ari}, {"nmi", out.scores->assigned_only->nmi}};
    else
      metrics["assigned_only"] = nullptr;
    report["metrics"] = metrics;
  }

  if (out.sweep) {
    json curve = json::array();
    for (const auto& p : out.sweep->points) {
      json point = {{"delta", p.delta}, {"n_assigned", p.n_assigned}, {"n_components", p.n_components}, {"n_centers", p.n_centers}};
      if (p.ari) point["ari"] = *p.ari;
      if (p.nmi) point["nmi"] = *p.nmi;
      curve.push_back(point);
    }
    report["sweep"] = curve;
  }
  return report;
}

std::string assignments_csv(const ClusterResult& result) {
  std::string out = "point_index,cluster_id\n";
  for (std::size_t i = 0; i < result.assignment.size(); ++i) out += fmt::format("{},{}\n", i, result.assignment[i]);
  return out;
}

}  // namespace hyperclust
