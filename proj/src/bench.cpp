#include "hyperclust/bench.hpp"

#include <chrono>
#include <cmath>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

namespace hyperclust {

std::vector<BenchEntry> load_manifest(const std::filesystem::path& manifest) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(manifest.string(), tree);
  } catch (const pt::ini_parser_error& e) {
    throw DataError(fmt::format("manifest '{}': {}", manifest.string(), e.what()));
  }

  const auto base = manifest.parent_path();
  std::vector<BenchEntry> entries;
  for (const auto& [name, section] : tree) {
    if (section.empty()) throw DataError(fmt::format("manifest '{}': key '{}' outside a section", manifest.string(), name));
    BenchEntry e;
    e.name = name;
    try {
      const auto path = section.get<std::string>("path");
      e.path = std::filesystem::path(path).is_absolute() ? std::filesystem::path(path) : base / path;
      e.csv.has_header = section.get("header", false);
      if (auto col = section.get_optional<std::size_t>("label_col")) e.csv.label_column = *col;
      e.config.preprocess.minmax = section.get("minmax", false);
      e.config.preprocess.center = section.get("center", false);
      if (auto mode = section.get_optional<std::string>("h_mode")) {
        auto parsed = parse_h_mode(*mode);
        if (!parsed) throw DataError(fmt::format("unknown h_mode '{}'", *mode));
        e.config.h_mode = *parsed;
      }
      if (auto delta = section.get_optional<std::size_t>("delta")) e.config.delta = *delta;
      e.config.repeats = section.get("repeats", e.config.repeats);
      e.config.seed = section.get("seed", e.config.seed);
      auto real = [&section](const char* key) -> std::optional<double> {
        if (auto v = section.get_optional<double>(key)) return *v;
        return std::nullopt;
      };
      e.target_ari = real("target_ari");
      e.target_nmi = real("target_nmi");
      e.target_ari_assigned = real("target_ari_assigned");
      e.target_nmi_assigned = real("target_nmi_assigned");
      e.band = section.get("band", e.band);
      e.optional = section.get("optional", false);
    } catch (const pt::ptree_error& err) {
      throw DataError(fmt::format("manifest section [{}]: {}", name, err.what()));
    }
    e.config.validate();
    entries.push_back(std::move(e));
  }
  return entries;
}

BenchOutcome run_bench_entry(const BenchEntry& entry) {
  BenchOutcome outcome;
  outcome.name = entry.name;
  if (!std::filesystem::exists(entry.path)) {
    outcome.status = "missing";
    outcome.message = fmt::format("dataset file '{}' not found", entry.path.string());
    return outcome;
  }
  const auto start = std::chrono::steady_clock::now();
  try {
    const Dataset raw = load_csv(entry.path, entry.csv);
    outcome.output = run_pipeline(raw, entry.config);
    outcome.status = "ok";
  } catch (const std::exception& e) {
    outcome.status = "error";
    outcome.message = e.what();
  }
  outcome.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (outcome.output && outcome.output->scores) {
    const Scores& s = *outcome.output->scores;
    auto near = [&](const std::optional<double>& target, std::optional<double> value) {
      return !target || (value && std::abs(*value - *target) <= entry.band + 1e-12);
    };
    const auto assigned_ari = s.assigned_only ? std::optional<double>(s.assigned_only->ari) : std::nullopt;
    const auto assigned_nmi = s.assigned_only ? std::optional<double>(s.assigned_only->nmi) : std::nullopt;
    outcome.within_band = near(entry.target_ari, s.full.ari) && near(entry.target_nmi, s.full.nmi) &&
                          near(entry.target_ari_assigned, assigned_ari) && near(entry.target_nmi_assigned, assigned_nmi);
  }
  return outcome;
}

nlohmann::json bench_report(const std::vector<BenchEntry>& entries, const std::vector<BenchOutcome>& outcomes) {
  using nlohmann::json;
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  json records = json::array();
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const auto& e = entries[i];
    const auto& o = outcomes[i];
    json rec = {{"name", o.name},
                {"path", e.path.string()},
                {"status", o.status},
                {"targets",
                 {{"ari", opt(e.target_ari)},
                  {"nmi", opt(e.target_nmi)},
                  {"ari_assigned", opt(e.target_ari_assigned)},
                  {"nmi_assigned", opt(e.target_nmi_assigned)},
                  {"band", e.band}}},
                {"optional", e.optional}};
    if (!o.message.empty()) rec["message"] = o.message;
    if (o.output) {
      const auto& out = *o.output;
      rec["n"] = out.dataset.size();
      rec["d"] = out.dataset.dims();
      rec["delta"] = out.delta;
      rec["delta_auto"] = out.delta_auto;
      rec["n_assigned"] = out.result().n_assigned;
      rec["n_clusters"] = out.result().centers.size();
      rec["seconds"] = o.seconds;
      if (out.scores) {
        rec["ari"] = out.scores->full.ari;
        rec["nmi"] = out.scores->full.nmi;
        rec["ari_assigned"] = out.scores->assigned_only ? json(out.scores->assigned_only->ari) : json(nullptr);
        rec["nmi_assigned"] = out.scores->assigned_only ? json(out.scores->assigned_only->nmi) : json(nullptr);
        rec["within_band"] = o.within_band;
      }
    }
    records.push_back(rec);
  }
  return json{{"algorithm", "hyperplane-clustering"}, {"entries", records}};
}

}  // namespace hyperclust
