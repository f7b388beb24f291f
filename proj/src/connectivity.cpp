#include "hyperclust/connectivity.hpp"

#include <cmath>
#include <numeric>

#include <fmt/format.h>

namespace hyperclust {
namespace {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), rank_(n, 0) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::uint8_t> rank_;
};

}  // namespace

Embedding embed(const Dataset& ds, const HyperplaneSet& planes) {
  Embedding emb;
  emb.coords.resize(ds.points.rows(), static_cast<Eigen::Index>(planes.size()));
  for (std::size_t j = 0; j < planes.size(); ++j) {
    const auto& p = planes.planes[j];
    emb.coords.col(static_cast<Eigen::Index>(j)) = ((ds.points * p.w).array() + p.b) / p.norm_w;
  }
  return emb;
}

Matrix embedding_distances(const Embedding& emb) {
  const Eigen::Index n = emb.coords.rows();
  Matrix dist(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    dist(i, i) = 0.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double d = (emb.coords.row(i) - emb.coords.row(j)).norm();
      dist(i, j) = d;
      dist(j, i) = d;
    }
  }
  return dist;
}

bool is_isolated(double activation, bool affiliated, double norm_w, MarginMode mode) {
  if (affiliated) return true;
  const double threshold = mode == MarginMode::paper_literal ? 1.0 / norm_w : 1.0;
  return std::abs(activation) > threshold;
}

bool is_isolated(const Dataset& ds, std::size_t point, const Hyperplane& plane, MarginMode mode) {
  return is_isolated(plane.activation(ds.points.row(static_cast<Eigen::Index>(point))), plane.is_affiliated(point),
                     plane.norm_w, mode);
}

double AffinityGraph::geodesic_distance(std::size_t i, std::size_t j) const {
  if (component_of[i] != component_of[j]) return kUnreachable;
  const auto& table = geodesic.at(component_of[i]);
  return table(static_cast<Eigen::Index>(local_index[i]), static_cast<Eigen::Index>(local_index[j]));
}

AffinityGraph build_affinity(const Dataset& ds, const HyperplaneSet& planes, MarginMode mode) {
  const std::size_t n = ds.size();
  AffinityGraph graph;
  graph.n = n;
  graph.adjacency.assign(n * n, 1);

  std::vector<std::uint8_t> affiliated(n);
  IndexList pos, neg;
  for (const auto& plane : planes.planes) {
    std::fill(affiliated.begin(), affiliated.end(), 0);
    for (std::size_t i : plane.affiliated) affiliated[i] = 1;
    const Vector act = (ds.points * plane.w).array() + plane.b;
    pos.clear();
    neg.clear();
    std::vector<std::uint8_t> isolated(n);
    for (std::size_t i = 0; i < n; ++i) {
      (act[static_cast<Eigen::Index>(i)] >= 0.0 ? pos : neg).push_back(i);
      isolated[i] = is_isolated(act[static_cast<Eigen::Index>(i)], affiliated[i] != 0, plane.norm_w, mode);
    }
    // Every isolated point loses its edges to the opposite side.
    auto cut = [&](const IndexList& side, const IndexList& other) {
      for (std::size_t i : side) {
        if (!isolated[i]) continue;
        for (std::size_t j : other) {
          graph.adjacency[i * n + j] = 0;
          graph.adjacency[j * n + i] = 0;
        }
      }
    };
    cut(pos, neg);
    cut(neg, pos);
  }

  UnionFind uf(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (graph.adjacency[i * n + j]) uf.unite(i, j);

  std::vector<std::size_t> root_to_comp(n, n);
  graph.component_of.resize(n);
  graph.local_index.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t root = uf.find(i);
    if (root_to_comp[root] == n) {
      root_to_comp[root] = graph.components.size();
      graph.components.emplace_back();
    }
    const std::size_t c = root_to_comp[root];
    graph.component_of[i] = c;
    graph.local_index[i] = graph.components[c].size();
    graph.components[c].push_back(i);
  }
  return graph;
}

void geodesic_distances(AffinityGraph& graph, const Matrix& dist) {
  graph.geodesic.clear();
  graph.geodesic.reserve(graph.components.size());
  std::vector<std::uint8_t> done;
  for (const auto& members : graph.components) {
    const std::size_t m = members.size();
    Matrix table = Matrix::Constant(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m), kUnreachable);
    // Dense Dijkstra: O(m^2) per source without a heap.
    for (std::size_t s = 0; s < m; ++s) {
      auto row = table.row(static_cast<Eigen::Index>(s));
      done.assign(m, 0);
      row[static_cast<Eigen::Index>(s)] = 0.0;
      for (std::size_t step = 0; step < m; ++step) {
        std::size_t u = m;
        double best = kUnreachable;
        for (std::size_t v = 0; v < m; ++v)
          if (!done[v] && row[static_cast<Eigen::Index>(v)] < best) {
            best = row[static_cast<Eigen::Index>(v)];
            u = v;
          }
        if (u == m) break;
        done[u] = 1;
        const std::size_t gu = members[u];
        for (std::size_t v = 0; v < m; ++v) {
          if (done[v]) continue;
          const std::size_t gv = members[v];
          if (!graph.adjacent(gu, gv)) continue;
          const double cand = best + dist(static_cast<Eigen::Index>(gu), static_cast<Eigen::Index>(gv));
          if (cand < row[static_cast<Eigen::Index>(v)]) row[static_cast<Eigen::Index>(v)] = cand;
        }
      }
    }
    graph.geodesic.push_back(std::move(table));
  }
}

void geodesic_distances(AffinityGraph& graph, const Embedding& emb) { geodesic_distances(graph, embedding_distances(emb)); }

std::string dump_components_csv(const AffinityGraph& graph) {
  std::string out = "point_index,component_id\n";
  for (std::size_t i = 0; i < graph.n; ++i) out += fmt::format("{},{}\n", i, graph.component_of[i]);
  return out;
}

}  // namespace hyperclust
