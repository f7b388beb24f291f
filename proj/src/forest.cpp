#include "hyperclust/forest.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <fmt/format.h>

namespace hyperclust {

ForestBuilder::ForestBuilder(const Dataset& ds, ForestOptions options) : ds_(ds), options_(std::move(options)) {}

void ForestBuilder::split_recursive(const IndexList& subset, std::size_t delta, std::uint64_t seed, std::int64_t parent,
                                    std::vector<Hyperplane>& out) {
  if (subset.size() < delta || subset.size() < 2) return;

  const Matrix pts = gather_rows(ds_.points, subset);
  const KMeansModel km = kmeans(pts, 2, derive_seed(seed, {0}), options_.kmeans);
  std::vector<int> signs(km.labels.size());
  std::transform(km.labels.begin(), km.labels.end(), signs.begin(), [](int l) { return l == 0 ? -1 : 1; });

  Hyperplane plane;
  try {
    plane = train_linear_svm(pts, signs, options_.svm);
  } catch (const std::exception&) {
    ++degenerate_;
    return;
  }

  IndexList positive, negative;
  for (std::size_t r = 0; r < subset.size(); ++r)
    (plane.activation(pts.row(static_cast<Eigen::Index>(r))) >= 0.0 ? positive : negative).push_back(subset[r]);
  if (positive.empty() || negative.empty()) {
    ++degenerate_;
    return;
  }

  plane.affiliated = subset;
  std::sort(plane.affiliated.begin(), plane.affiliated.end());
  plane.id = next_id_++;
  plane.parent = parent;
  const auto id = static_cast<std::int64_t>(plane.id);
  out.push_back(std::move(plane));
  split_recursive(positive, delta, derive_seed(seed, {1}), id, out);
  split_recursive(negative, delta, derive_seed(seed, {2}), id, out);
}

HyperplaneSet ForestBuilder::f_delta(const IndexList& subset, std::size_t delta, std::uint64_t seed) {
  if (delta < 2) throw DataError(fmt::format("delta must be >= 2, got {}", delta));
  HyperplaneSet set;
  set.mode = PlaneSetMode::L;
  set.delta = delta;
  split_recursive(subset, delta, seed, -1, set.planes);
  return set;
}

HyperplaneSet ForestBuilder::fixed_point_l_prime(std::size_t delta, std::uint64_t seed) {
  if (delta < 2) throw DataError(fmt::format("delta must be >= 2, got {}", delta));
  HyperplaneSet l_prime;
  l_prime.mode = PlaneSetMode::L_prime;
  l_prime.delta = delta;

  for (std::size_t round = 0;; ++round) {
    if (round == options_.max_rounds) {
      l_prime.truncated = true;
      break;
    }
    const auto cells = partition_cells(ds_, l_prime);
    HyperplaneSet fresh;
    fresh.delta = delta;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (cells[c].size() < delta) continue;
      auto part = f_delta(cells[c], delta, derive_seed(seed, {round, c}));
      std::move(part.planes.begin(), part.planes.end(), std::back_inserter(fresh.planes));
    }
    if (fresh.empty()) break;
    const std::size_t first_new = fresh.planes.front().id;
    HyperplaneSet pool = fresh;
    if (options_.phi_scope == PhiScope::joint) pool.planes.insert(pool.planes.begin(), l_prime.planes.begin(), l_prime.planes.end());
    std::size_t added = 0;
    for (auto& plane : phi_filter(pool).planes)
      if (plane.id >= first_new) {
        l_prime.planes.push_back(std::move(plane));
        ++added;
      }
    if (added == 0) break;
    l_prime.rounds = round + 1;
  }
  return l_prime;
}

HyperplaneSet ForestBuilder::experiment_h(std::size_t delta, std::uint64_t seed) {
  IndexList all(ds_.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  HyperplaneSet h = f_delta(all, delta, derive_seed(seed, {0}));
  const auto cells = partition_cells(ds_, h);
  for (std::size_t c = 0; c < cells.size(); ++c) {
    if (cells[c].size() < delta) continue;
    auto part = f_delta(cells[c], delta, derive_seed(seed, {1, c}));
    std::move(part.planes.begin(), part.planes.end(), std::back_inserter(h.planes));
  }
  h.mode = PlaneSetMode::H_experiment;
  h.rounds = 1;
  return h;
}

HyperplaneSet phi_filter(const HyperplaneSet& planes) {
  if (planes.size() <= 1) return planes;
  std::vector<double> norms;
  norms.reserve(planes.size());
  for (const auto& p : planes.planes) norms.push_back(p.norm_w);
  const auto [lo, hi] = std::minmax_element(norms.begin(), norms.end());
  if (*hi - *lo <= 1e-12) return planes;

  const auto groups = split_scalars_two_means(norms);
  HyperplaneSet kept;
  kept.mode = planes.mode;
  kept.delta = planes.delta;
  for (std::size_t i = 0; i < planes.size(); ++i)
    if (groups[i] == 0) kept.planes.push_back(planes.planes[i]);
  return kept;
}

std::vector<IndexList> partition_cells(const Dataset& ds, const HyperplaneSet& planes, const IndexList& subset) {
  std::map<std::vector<bool>, std::size_t> cell_of;
  std::vector<IndexList> cells;
  std::vector<bool> key(planes.size());
  for (std::size_t i : subset) {
    const auto row = ds.points.row(static_cast<Eigen::Index>(i));
    for (std::size_t p = 0; p < planes.size(); ++p) key[p] = planes.planes[p].activation(row) >= 0.0;
    auto [it, inserted] = cell_of.try_emplace(key, cells.size());
    if (inserted) cells.emplace_back();
    cells[it->second].push_back(i);
  }
  return cells;
}

std::vector<IndexList> partition_cells(const Dataset& ds, const HyperplaneSet& planes) {
  IndexList all(ds.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return partition_cells(ds, planes, all);
}

std::string dump_planes_csv(const HyperplaneSet& planes) {
  std::string out = "id,norm_w,affiliated,parent\n";
  for (const auto& p : planes.planes) out += fmt::format("{},{:.17g},{},{}\n", p.id, p.norm_w, p.affiliated.size(), p.parent);
  return out;
}

}  // namespace hyperclust
