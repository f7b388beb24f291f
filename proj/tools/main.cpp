// hyperclust command-line front end.
//
// Exit codes: 0 success, 1 usage, 2 data error, 3 numeric failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "hyperclust/bench.hpp"
#include "hyperclust/pipeline.hpp"

namespace fs = std::filesystem;
using namespace hyperclust;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kDataError = 2, kNumericError = 3 };

// Writes through a temporary sibling so readers never see a partial file.
void write_atomically(const fs::path& path, const std::string& contents) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw DataError(fmt::format("cannot write '{}'", path.string()));
    out << contents;
    if (!out) throw DataError(fmt::format("write to '{}' failed", path.string()));
  }
  fs::rename(tmp, path);
}

void emit(const std::string& path, const std::string& contents) {
  if (path.empty() || path == "-")
    std::cout << contents;
  else
    write_atomically(path, contents);
}

struct InputFlags {
  std::string input;
  int label_col = -1;
  bool header = false;
  bool minmax = false;
  bool center = false;
};

struct SolverFlags {
  std::string h_mode = "experiment";
  std::string margin_mode = "paper";
  std::size_t repeats = 5;
  std::uint64_t seed = 0;
  double svm_c = 100.0;
  double svm_tol = 1e-4;
  double kmeans_tol = 1e-6;
  std::size_t max_rounds = 10;
  bool assigned_only = false;
  bool geometric_nmi = false;
};

void add_input_flags(CLI::App* cmd, InputFlags& f) {
  cmd->add_option("--input", f.input, "Input CSV")->required();
  cmd->add_option("--label-col", f.label_col, "Zero-based label column (-1 = none)");
  cmd->add_flag("--header", f.header, "First row is a header");
  cmd->add_flag("--minmax", f.minmax, "Min-max normalize columns");
  cmd->add_flag("--center", f.center, "Subtract column means");
}

void add_solver_flags(CLI::App* cmd, SolverFlags& f) {
  cmd->add_option("--h-mode", f.h_mode, "Hyperplane set: experiment or fixed_point")->capture_default_str();
  cmd->add_option("--margin-mode", f.margin_mode, "Isolation test: paper or canonical")->capture_default_str();
  cmd->add_option("--repeats", f.repeats, "Runs per delta; the best is kept")->capture_default_str();
  cmd->add_option("--seed", f.seed, "Master seed")->capture_default_str();
  cmd->add_option("--svm-c", f.svm_c, "SVM cost")->capture_default_str();
  cmd->add_option("--svm-tol", f.svm_tol, "SVM KKT tolerance")->capture_default_str();
  cmd->add_option("--kmeans-tol", f.kmeans_tol, "K-means relative inertia tolerance")->capture_default_str();
  cmd->add_option("--max-rounds", f.max_rounds, "Fixed-point round limit")->capture_default_str();
  cmd->add_flag("--assigned-only", f.assigned_only, "Score only assigned points in sweeps");
  cmd->add_flag("--geometric-nmi", f.geometric_nmi, "Normalize NMI by the geometric mean of entropies");
}

Dataset load_input(const InputFlags& f) {
  CsvOptions csv;
  csv.has_header = f.header;
  if (f.label_col >= 0) csv.label_column = static_cast<std::size_t>(f.label_col);
  return load_csv(f.input, csv);
}

RunConfig make_config(const InputFlags& in, const SolverFlags& f) {
  RunConfig cfg;
  const auto h_mode = parse_h_mode(f.h_mode);
  if (!h_mode) throw CLI::ValidationError("--h-mode", "expected experiment or fixed_point");
  const auto margin = parse_margin_mode(f.margin_mode);
  if (!margin) throw CLI::ValidationError("--margin-mode", "expected paper or canonical");
  cfg.h_mode = *h_mode;
  cfg.margin_mode = *margin;
  cfg.repeats = f.repeats;
  cfg.seed = f.seed;
  cfg.forest.svm.c = f.svm_c;
  cfg.forest.svm.tol = f.svm_tol;
  cfg.forest.kmeans.tol = f.kmeans_tol;
  cfg.forest.max_rounds = f.max_rounds;
  cfg.metric_mode = f.assigned_only ? MetricMode::assigned_only : MetricMode::full;
  cfg.nmi_norm = f.geometric_nmi ? NmiNormalization::geometric : NmiNormalization::arithmetic;
  cfg.preprocess = {in.minmax, in.center};
  return cfg;
}

// Prefixes errors with the pipeline stage that raised them.
template <typename Fn>
auto staged(const char* stage, Fn&& fn) {
  try {
    return fn();
  } catch (const DataError& e) {
    throw DataError(fmt::format("[{}] {}", stage, e.what()));
  } catch (const NumericError& e) {
    throw NumericError(fmt::format("[{}] {}", stage, e.what()));
  }
}

// Reads the last column of a label CSV; a non-numeric first row is a header.
std::vector<int> read_labels(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError(fmt::format("cannot open '{}'", path));
  std::vector<int> labels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const std::string cell = line.substr(line.find_last_of(',') == std::string::npos ? 0 : line.find_last_of(',') + 1);
    try {
      std::size_t used = 0;
      const int value = std::stoi(cell, &used);
      if (cell.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(cell);
      labels.push_back(value);
    } catch (const std::exception&) {
      if (labels.empty() && line_no == 1) continue;
      throw DataError(fmt::format("{}:{}: label '{}' is not an integer", path, line_no, cell));
    }
  }
  if (labels.empty()) throw DataError(fmt::format("'{}' has no labels", path));
  return labels;
}

int run_cluster(const InputFlags& in, const SolverFlags& sf, int delta, const std::string& out_report,
                const std::string& out_assignments) {
  RunConfig cfg = make_config(in, sf);
  if (delta > 0) cfg.delta = static_cast<std::size_t>(delta);
  const Dataset raw = staged("load", [&] { return load_input(in); });
  const PipelineOutput out = staged("cluster", [&] { return run_pipeline(raw, cfg); });
  emit(out_report, report_json(out, cfg).dump(2) + "\n");
  if (!out_assignments.empty()) emit(out_assignments, assignments_csv(out.result()));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Clustering by recursively constructed maximum-margin hyperplanes"};
  app.require_subcommand(1);

  InputFlags in;
  SolverFlags sf;

  auto* cluster = app.add_subcommand("cluster", "Cluster a CSV dataset");
  add_input_flags(cluster, in);
  add_solver_flags(cluster, sf);
  int delta = 0;
  std::string out_report = "-", out_assignments;
  cluster->add_option("--delta", delta, "Split threshold (omit to select from a sweep)")->check(CLI::Range(2, 1 << 30));
  cluster->add_option("--out-report", out_report, "JSON report path ('-' = stdout)");
  cluster->add_option("--out-assignments", out_assignments, "Assignments CSV path");

  auto* sweep_cmd = app.add_subcommand("sweep", "Record N(delta) over a grid and select delta");
  add_input_flags(sweep_cmd, in);
  add_solver_flags(sweep_cmd, sf);
  std::vector<std::size_t> grid;
  std::size_t grid_min = 0, grid_max = 0, grid_steps = 24;
  std::string sweep_out = "-", plot;
  sweep_cmd->add_option("--grid", grid, "Explicit delta values")->delimiter(',');
  sweep_cmd->add_option("--grid-min", grid_min, "Smallest delta");
  sweep_cmd->add_option("--grid-max", grid_max, "Largest delta");
  sweep_cmd->add_option("--grid-steps", grid_steps, "Number of grid values")->capture_default_str();
  sweep_cmd->add_option("--out", sweep_out, "Sweep CSV path ('-' = stdout)");
  sweep_cmd->add_option("--plot", plot, "Write an SVG chart here");

  auto* synth = app.add_subcommand("synth", "Generate a synthetic 2-D dataset");
  std::string shape_name = "circles", synth_out = "-";
  std::size_t synth_n = 1600;
  double noise = 0.0;
  std::uint64_t synth_seed = 0;
  synth->add_option("--shape", shape_name, "circles, moons, spiral or spiral-single")->capture_default_str();
  synth->add_option("--n", synth_n, "Number of points (even)")->capture_default_str();
  synth->add_option("--noise", noise, "Gaussian noise standard deviation")->capture_default_str();
  synth->add_option("--seed", synth_seed, "Noise seed")->capture_default_str();
  synth->add_option("--out", synth_out, "Output CSV (label in the last column)");

  auto* eval = app.add_subcommand("eval", "Score predicted labels against ground truth");
  std::string truth_path, pred_path;
  bool assigned_only = false;
  eval->add_option("--truth", truth_path, "Truth label CSV (last column)")->required();
  eval->add_option("--pred", pred_path, "Predicted label CSV (last column, -1 = unassigned)")->required();
  eval->add_flag("--assigned-only", assigned_only, "Score only assigned points");

  auto* bench = app.add_subcommand("bench", "Run every dataset in a benchmark manifest");
  std::string manifest, bench_out = "-";
  bench->add_option("--manifest", manifest, "INI manifest")->required();
  bench->add_option("--out", bench_out, "Consolidated JSON report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*cluster) return run_cluster(in, sf, delta, out_report, out_assignments);

    if (*sweep_cmd) {
      RunConfig cfg = make_config(in, sf);
      const Dataset ds = preprocess(load_input(in), cfg.preprocess);
      std::vector<std::size_t> values = grid;
      if (values.empty()) {
        const auto fallback = default_grid(ds.size(), grid_steps);
        values = linear_grid(grid_min ? grid_min : fallback.front(), grid_max ? grid_max : fallback.back(), grid_steps);
      }
      const SweepCurve curve = sweep(ds, values, cfg);
      emit(sweep_out, sweep_csv(curve));
      if (!plot.empty()) emit(plot, sweep_svg(curve, ds.size()));
      std::cerr << fmt::format("selected delta: {}\n", curve.selected_delta);
      return kOk;
    }

    if (*synth) {
      const auto shape = parse_shape(shape_name);
      if (!shape) {
        std::cerr << fmt::format("unknown shape '{}'\n", shape_name);
        return kUsage;
      }
      const Dataset ds = gen_synthetic(*shape, synth_n, noise, synth_seed);
      if (synth_out.empty() || synth_out == "-")
        write_csv(ds, std::cout);
      else
        save_csv(ds, synth_out);
      return kOk;
    }

    if (*eval) {
      const auto truth = read_labels(truth_path);
      const auto pred = read_labels(pred_path);
      const MetricMode mode = assigned_only ? MetricMode::assigned_only : MetricMode::full;
      const auto [t, p] = restrict_assigned(truth, pred, mode);
      const auto n_assigned = std::count_if(pred.begin(), pred.end(), [](int l) { return l != kUnassigned; });
      const nlohmann::json rec = {{"ari", ari(t, p)}, {"nmi", nmi(t, p)}, {"n", truth.size()},
                                  {"n_assigned", n_assigned}, {"mode", metric_mode_name(mode)}};
      std::cout << rec.dump() << "\n";
      return kOk;
    }

    if (*bench) {
      const auto entries = load_manifest(manifest);
      std::vector<BenchOutcome> outcomes;
      for (const auto& e : entries) {
        std::cerr << fmt::format("[{}] running...\n", e.name);
        outcomes.push_back(run_bench_entry(e));
        std::cerr << fmt::format("[{}] {} {:.1f}s\n", e.name, outcomes.back().status, outcomes.back().seconds);
      }
      emit(bench_out, bench_report(entries, outcomes).dump(2) + "\n");
      return kOk;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kDataError;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kNumericError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDataError;
  }
  return kUsage;
}
