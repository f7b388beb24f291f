#include "hyperclust/delta_search.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "hyperclust/pipeline.hpp"

namespace hyperclust {

std::vector<std::size_t> linear_grid(std::size_t lo, std::size_t hi, std::size_t steps) {
  lo = std::max<std::size_t>(lo, 2);
  hi = std::max(hi, lo);
  steps = std::max<std::size_t>(steps, 1);
  std::vector<std::size_t> grid;
  for (std::size_t i = 0; i < steps; ++i) {
    const double t = steps == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(steps - 1);
    grid.push_back(static_cast<std::size_t>(std::llround(static_cast<double>(lo) + t * static_cast<double>(hi - lo))));
  }
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

std::vector<std::size_t> default_grid(std::size_t n, std::size_t steps) {
  return linear_grid(std::max<std::size_t>(4, n / 100), n / 3, steps);
}

std::size_t select_peak(std::span<const std::size_t> n_assigned, std::size_t n_total) {
  const std::size_t m = n_assigned.size();
  std::vector<std::size_t> peaks;
  for (std::size_t j = 1; j < m; ++j) {
    if (!(n_assigned[j] > n_assigned[j - 1])) continue;
    std::size_t end = j;
    while (end + 1 < m && n_assigned[end + 1] == n_assigned[j]) ++end;
    if (end + 1 == m || n_assigned[end + 1] < n_assigned[j]) peaks.push_back(j);
  }
  for (std::size_t j : peaks)
    if (2 * n_assigned[j] > n_total) return j;
  auto higher = [&](std::size_t a, std::size_t b) { return n_assigned[a] < n_assigned[b]; };
  if (!peaks.empty()) return *std::max_element(peaks.begin(), peaks.end(), higher);
  return static_cast<std::size_t>(std::max_element(n_assigned.begin(), n_assigned.end()) - n_assigned.begin());
}

std::size_t select_delta(const SweepCurve& curve, std::size_t n_total) {
  if (curve.grid.empty()) throw DataError("cannot select delta from an empty sweep");
  const std::size_t j = select_peak(curve.n_assigned, n_total);
  return curve.grid[j == 0 ? 0 : j - 1];
}

std::size_t best_of_index(std::span<const ClusterResult> runs) {
  if (runs.empty()) throw DataError("best_of needs at least one run");
  auto mean_m = [](const ClusterResult& r) {
    if (r.center_m.empty()) return 0.0;
    double s = 0.0;
    for (double m : r.center_m) s += m;
    return s / static_cast<double>(r.center_m.size());
  };
  std::size_t best = 0;
  for (std::size_t i = 1; i < runs.size(); ++i) {
    if (runs[i].n_assigned > runs[best].n_assigned ||
        (runs[i].n_assigned == runs[best].n_assigned && mean_m(runs[i]) > mean_m(runs[best])))
      best = i;
  }
  return best;
}

const ClusterResult& best_of(std::span<const ClusterResult> runs) { return runs[best_of_index(runs)]; }

SweepCurve sweep(const Dataset& ds, const std::vector<std::size_t>& grid, const RunConfig& cfg) {
  if (grid.empty()) throw DataError("sweep grid is empty");
  SweepCurve curve;
  curve.grid = grid;
  std::sort(curve.grid.begin(), curve.grid.end());
  curve.grid.erase(std::unique(curve.grid.begin(), curve.grid.end()), curve.grid.end());
  if (curve.grid.front() < 2) throw DataError(fmt::format("sweep delta must be >= 2, got {}", curve.grid.front()));

  for (std::size_t delta : curve.grid) {
    const RepeatedRuns runs = run_repeats(ds, delta, cfg);
    const RunRecord& best = runs.best();
    SweepPoint point;
    point.delta = delta;
    point.n_assigned = best.result.n_assigned;
    point.n_components = best.stats.size();
    point.n_centers = best.result.centers.size();
    if (ds.truth_labels) {
      const Scores s = score(*ds.truth_labels, best.result, cfg.nmi_norm);
      const ScoredMetrics chosen = cfg.metric_mode == MetricMode::full || !s.assigned_only ? s.full : *s.assigned_only;
      point.ari = chosen.ari;
      point.nmi = chosen.nmi;
    }
    curve.n_assigned.push_back(point.n_assigned);
    curve.points.push_back(point);
  }
  curve.selected_delta = select_delta(curve, ds.size());
  return curve;
}

std::string sweep_csv(const SweepCurve& curve) {
  const bool scored = !curve.points.empty() && curve.points.front().ari.has_value();
  std::string out = scored ? "delta,n_assigned,n_components,n_centers,ari,nmi\n" : "delta,n_assigned,n_components,n_centers\n";
  for (const auto& p : curve.points) {
    out += fmt::format("{},{},{},{}", p.delta, p.n_assigned, p.n_components, p.n_centers);
    if (scored) out += fmt::format(",{:.6f},{:.6f}", p.ari.value_or(0.0), p.nmi.value_or(0.0));
    out += '\n';
  }
  return out;
}

std::string sweep_svg(const SweepCurve& curve, std::size_t n_total) {
  constexpr double kWidth = 720, kHeight = 360, kLeft = 50, kRight = 20, kTop = 20, kBottom = 40;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  const std::size_t m = curve.points.size();
  const double slot = m ? plot_w / static_cast<double>(m) : plot_w;
  const double total = std::max<double>(1.0, static_cast<double>(n_total));
  auto x_of = [&](std::size_t i) { return kLeft + slot * (static_cast<double>(i) + 0.5); };
  auto y_of = [&](double frac) { return kTop + plot_h * (1.0 - std::clamp(frac, 0.0, 1.0)); };

  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      "<line x1=\"{2}\" y1=\"{3}\" x2=\"{2}\" y2=\"{4}\" stroke=\"black\"/>\n"
      "<line x1=\"{2}\" y1=\"{4}\" x2=\"{5}\" y2=\"{4}\" stroke=\"black\"/>\n",
      kWidth, kHeight, kLeft, kTop, kTop + plot_h, kLeft + plot_w);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& p = curve.points[i];
    const double bar = slot * 0.35;
    if (p.ari) {
      svg += fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"orange\"/>\n",
                         x_of(i) - bar, y_of(*p.ari), bar, kTop + plot_h - y_of(*p.ari));
    }
    if (p.nmi) {
      svg += fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"gray\"/>\n", x_of(i),
                         y_of(*p.nmi), bar, kTop + plot_h - y_of(*p.nmi));
    }
    svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"9\" text-anchor=\"middle\">{}</text>\n", x_of(i),
                       kTop + plot_h + 14, p.delta);
  }
  std::string line;
  for (std::size_t i = 0; i < m; ++i)
    line += fmt::format("{}{:.2f},{:.2f}", i ? " " : "", x_of(i), y_of(static_cast<double>(curve.points[i].n_assigned) / total));
  svg += fmt::format("<polyline points=\"{}\" fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\"/>\n", line);
  for (std::size_t i = 0; i < m; ++i)
    if (curve.points[i].delta == curve.selected_delta)
      svg += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"5\" fill=\"red\"/>\n", x_of(i),
                         y_of(static_cast<double>(curve.points[i].n_assigned) / total));
  svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"11\" text-anchor=\"middle\">delta</text>\n",
                     kLeft + plot_w / 2, kHeight - 6);
  svg += "</svg>\n";
  return svg;
}

}  // namespace hyperclust
