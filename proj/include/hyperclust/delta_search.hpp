#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hyperclust/dataset.hpp"
#include "hyperclust/measure.hpp"

namespace hyperclust {

struct RunConfig;

struct SweepPoint {
  std::size_t delta = 0;
  std::size_t n_assigned = 0;
  std::size_t n_components = 0;
  std::size_t n_centers = 0;
  std::optional<double> ari;
  std::optional<double> nmi;
};

// N(delta) over an ascending grid.
struct SweepCurve {
  std::vector<std::size_t> grid;
  std::vector<std::size_t> n_assigned;
  std::size_t selected_delta = 0;
  std::vector<SweepPoint> points;
};

// 24 (or `steps`) integer values spaced linearly from max(4, n/100) to n/3,
// deduplicated and clamped to >= 2.
std::vector<std::size_t> default_grid(std::size_t n, std::size_t steps = 24);
std::vector<std::size_t> linear_grid(std::size_t lo, std::size_t hi, std::size_t steps);

// Index of the first peak whose N exceeds n_total/2, else of the highest peak,
// else of the global maximum. A peak rises strictly from its left neighbor;
// a plateau counts once, at its first index, when it is followed by a drop or
// by the end of the curve.
std::size_t select_peak(std::span<const std::size_t> n_assigned, std::size_t n_total);

// The grid value just before the selected peak (grid[0] for a peak at 0).
std::size_t select_delta(const SweepCurve& curve, std::size_t n_total);

// Largest n_assigned, then larger mean center M, then earliest.
std::size_t best_of_index(std::span<const ClusterResult> runs);
const ClusterResult& best_of(std::span<const ClusterResult> runs);

// Runs cfg.repeats passes per grid value and records the best run's N.
// Throws DataError for an empty grid or any delta < 2.
SweepCurve sweep(const Dataset& ds, const std::vector<std::size_t>& grid, const RunConfig& cfg);

// delta,n_assigned,n_components,n_centers[,ari,nmi]
std::string sweep_csv(const SweepCurve& curve);

// N(delta) as a line over ARI/NMI bars, with the selected delta marked.
std::string sweep_svg(const SweepCurve& curve, std::size_t n_total);

}  // namespace hyperclust
