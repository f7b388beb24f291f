#include "hyperclust/measure.hpp"

#include <algorithm>
#include <deque>
#include <limits>

namespace hyperclust {

const char* role_name(ComponentRole role) {
  switch (role) {
    case ComponentRole::PCC: return "PCC";
    case ComponentRole::HCC: return "HCC";
    case ComponentRole::OTHER: return "OTHER";
  }
  return "OTHER";
}

double intra_dis(const IndexList& members, const AffinityGraph& graph) {
  const std::size_t m = members.size();
  if (m < 2) return 0.0;
  double sum = 0.0;
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b) sum += graph.geodesic_distance(members[a], members[b]);
  return 2.0 * sum / (static_cast<double>(m) * static_cast<double>(m - 1));
}

namespace {

// Nearest point outside `comp`; ties resolve to the lowest index. Returns n if none.
std::size_t nearest_outside(std::size_t p, std::size_t comp, const AffinityGraph& graph, const Matrix& dist) {
  std::size_t best = graph.n;
  double best_d = std::numeric_limits<double>::infinity();
  const auto row = dist.row(static_cast<Eigen::Index>(p));
  for (std::size_t q = 0; q < graph.n; ++q) {
    if (graph.component_of[q] == comp) continue;
    const double d = row[static_cast<Eigen::Index>(q)];
    if (d < best_d) {
      best_d = d;
      best = q;
    }
  }
  return best;
}

}  // namespace

double inter_dis(const IndexList& members, const AffinityGraph& graph, const Matrix& dist) {
  if (members.empty()) return 0.0;
  const std::size_t comp = graph.component_of[members.front()];
  double sum = 0.0;
  for (std::size_t p : members) {
    const std::size_t q = nearest_outside(p, comp, graph, dist);
    if (q == graph.n) return 0.0;
    sum += dist(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q));
  }
  return sum / static_cast<double>(members.size());
}

double measure_m(std::size_t size, double intra, double inter, std::size_t delta) {
  const double gate = std::max(1.0, static_cast<double>(delta) / 4.0);
  if (static_cast<double>(size) <= gate) return 0.0;
  return inter / std::max(intra, kIntraFloor);
}

std::vector<std::set<std::size_t>> neighbor_map(const AffinityGraph& graph, const Matrix& dist) {
  std::vector<std::set<std::size_t>> neighbors(graph.components.size());
  for (std::size_t c = 0; c < graph.components.size(); ++c)
    for (std::size_t p : graph.components[c]) {
      const std::size_t q = nearest_outside(p, c, graph, dist);
      if (q != graph.n) neighbors[c].insert(graph.component_of[q]);
    }
  return neighbors;
}

void classify_roles(std::vector<ComponentStats>& stats) {
  for (auto& s : stats) {
    std::size_t larger = 0;
    for (std::size_t nb : s.neighbors)
      if (stats[nb].m_value > s.m_value) ++larger;
    if (larger == 0 && !s.neighbors.empty()) {
      const bool strict = std::all_of(s.neighbors.begin(), s.neighbors.end(),
                                      [&](std::size_t nb) { return s.m_value > stats[nb].m_value; });
      s.role = strict ? ComponentRole::PCC : ComponentRole::OTHER;
    } else if (larger == 1) {
      s.role = ComponentRole::HCC;
    } else {
      s.role = ComponentRole::OTHER;
    }
  }
}

std::vector<std::size_t> select_centers(const std::vector<ComponentStats>& stats) {
  const std::size_t k = stats.size();
  if (k == 1) return {stats.front().id};
  const std::size_t needed = (k + 1) / 2;
  std::vector<std::size_t> centers;
  for (const auto& s : stats) {
    if (s.role != ComponentRole::PCC) continue;
    const auto beaten = static_cast<std::size_t>(
        std::count_if(stats.begin(), stats.end(), [&](const ComponentStats& o) { return o.id != s.id && s.m_value > o.m_value; }));
    if (beaten >= needed) centers.push_back(s.id);
  }
  std::sort(centers.begin(), centers.end(), [&](std::size_t a, std::size_t b) {
    if (stats[a].m_value != stats[b].m_value) return stats[a].m_value > stats[b].m_value;
    return a < b;
  });
  return centers;
}

ClusterResult grow_clusters(const std::vector<ComponentStats>& stats, const std::vector<std::size_t>& centers,
                            std::size_t n_points) {
  ClusterResult result;
  result.assignment.assign(n_points, kUnassigned);
  std::vector<int> cluster_of(stats.size(), kUnassigned);

  for (std::size_t c = 0; c < centers.size(); ++c) {
    const auto cluster = static_cast<int>(result.centers.size());
    const std::size_t center = centers[c];
    if (cluster_of[center] != kUnassigned) continue;
    result.centers.push_back(center);
    result.center_m.push_back(stats[center].m_value);
    cluster_of[center] = cluster;
    std::deque<std::size_t> queue{center};
    while (!queue.empty()) {
      const std::size_t p = queue.front();
      queue.pop_front();
      for (std::size_t q : stats[p].neighbors) {
        if (cluster_of[q] != kUnassigned) continue;
        if (stats[q].role != ComponentRole::HCC || !(stats[p].m_value > stats[q].m_value)) continue;
        cluster_of[q] = cluster;
        queue.push_back(q);
      }
    }
  }

  for (const auto& s : stats)
    if (cluster_of[s.id] != kUnassigned)
      for (std::size_t i : s.members) {
        result.assignment[i] = cluster_of[s.id];
        ++result.n_assigned;
      }
  return result;
}

std::vector<ComponentStats> component_stats(const AffinityGraph& graph, const Matrix& dist, std::size_t delta) {
  const std::size_t k = graph.components.size();
  std::vector<ComponentStats> stats(k);
  const auto neighbors = k > 1 ? neighbor_map(graph, dist) : std::vector<std::set<std::size_t>>(k);
  for (std::size_t c = 0; c < k; ++c) {
    auto& s = stats[c];
    s.id = c;
    s.members = graph.components[c];
    s.intra_dis = intra_dis(s.members, graph);
    s.inter_dis = k > 1 ? inter_dis(s.members, graph, dist) : 0.0;
    s.m_value = measure_m(s.members.size(), s.intra_dis, s.inter_dis, delta);
    s.neighbors = neighbors[c];
  }
  classify_roles(stats);
  return stats;
}

}  // namespace hyperclust
