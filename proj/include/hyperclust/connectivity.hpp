#pragma once

#include <limits>
#include <string>
#include <vector>

#include "hyperclust/dataset.hpp"
#include "hyperclust/forest.hpp"

namespace hyperclust {

// Row i holds the signed distances (w.x_i + b)/||w|| to every plane.
struct Embedding {
  Matrix coords;
};

Embedding embed(const Dataset& ds, const HyperplaneSet& planes);

// Dense Euclidean distances between embedding rows.
Matrix embedding_distances(const Embedding& emb);

enum class MarginMode {
  // |w.x + b| > 1/||w||
  paper_literal,
  // |w.x + b| > 1, the canonical SVM margin boundary
  canonical,
};

bool is_isolated(double activation, bool affiliated, double norm_w, MarginMode mode);
bool is_isolated(const Dataset& ds, std::size_t point, const Hyperplane& plane, MarginMode mode = MarginMode::paper_literal);

inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();

struct AffinityGraph {
  std::size_t n = 0;
  // Row-major n x n, 1 = adjacent. The diagonal is set.
  std::vector<std::uint8_t> adjacency;
  std::vector<std::size_t> component_of;
  // Members ascend; components are ordered by their smallest member.
  std::vector<IndexList> components;
  // Position of each point inside its component's member list.
  std::vector<std::size_t> local_index;
  // Per component, |C| x |C| shortest-path lengths; empty until computed.
  std::vector<Matrix> geodesic;

  bool adjacent(std::size_t i, std::size_t j) const { return adjacency[i * n + j] != 0; }
  // kUnreachable across components.
  double geodesic_distance(std::size_t i, std::size_t j) const;
};

// Points i and j are non-adjacent when some plane puts them on opposite sides
// and at least one of them is isolated to it. Components come from union-find.
AffinityGraph build_affinity(const Dataset& ds, const HyperplaneSet& planes, MarginMode mode = MarginMode::paper_literal);

// Dijkstra inside each component over adjacency edges weighted by embedding
// distance. `dist` is embedding_distances(emb).
void geodesic_distances(AffinityGraph& graph, const Matrix& dist);
void geodesic_distances(AffinityGraph& graph, const Embedding& emb);

// "point_index,component_id" lines with a header.
std::string dump_components_csv(const AffinityGraph& graph);

}  // namespace hyperclust
