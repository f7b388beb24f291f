#pragma once

#include <cstdint>
#include <set>
#include <vector>

#include "hyperclust/connectivity.hpp"

namespace hyperclust {

enum class ComponentRole { PCC, HCC, OTHER };

const char* role_name(ComponentRole role);

struct ComponentStats {
  std::size_t id = 0;
  IndexList members;
  double intra_dis = 0.0;
  double inter_dis = 0.0;
  double m_value = 0.0;
  std::set<std::size_t> neighbors;
  ComponentRole role = ComponentRole::OTHER;
};

inline constexpr int kUnassigned = -1;

struct ClusterResult {
  std::vector<int> assignment;
  // Component ids of the cluster centers; cluster c grows from centers[c].
  std::vector<std::size_t> centers;
  // M of each center, parallel to `centers`.
  std::vector<double> center_m;
  std::size_t delta = 0;
  std::uint64_t seed = 0;
  std::size_t n_assigned = 0;
};

inline constexpr double kIntraFloor = 1e-12;

// Mean geodesic distance over unordered member pairs; 0 for singletons.
double intra_dis(const IndexList& members, const AffinityGraph& graph);

// Mean over members of the distance to the nearest point outside the component.
double inter_dis(const IndexList& members, const AffinityGraph& graph, const Matrix& dist);

// Zero when the component has at most max(1, delta/4) members.
double measure_m(std::size_t size, double intra, double inter, std::size_t delta);

// neighbors[i] = components owning the nearest outside point of some member of
// component i (ties go to the lowest point index). Directional.
std::vector<std::set<std::size_t>> neighbor_map(const AffinityGraph& graph, const Matrix& dist);

// PCC: strictly larger M than every neighbor. HCC: exactly one neighbor larger.
void classify_roles(std::vector<ComponentStats>& stats);

// PCCs whose M strictly exceeds at least ceil(k/2) other components, in
// descending M (ties by id). A lone component is its own center.
std::vector<std::size_t> select_centers(const std::vector<ComponentStats>& stats);

// Breadth-first growth from each center (descending M) through lower-M HCC
// neighbors. A component joins at most one cluster; the rest stay unassigned.
ClusterResult grow_clusters(const std::vector<ComponentStats>& stats, const std::vector<std::size_t>& centers,
                            std::size_t n_points);

// Computes intra/inter distances, M, neighbors and roles for every component.
std::vector<ComponentStats> component_stats(const AffinityGraph& graph, const Matrix& dist, std::size_t delta);

}  // namespace hyperclust
