#include <numeric>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "hyperclust/connectivity.hpp"
#include "hyperclust/forest.hpp"
#include "hyperclust/measure.hpp"

using namespace hyperclust;

namespace {

// Graph over n points with the given components and every pair inside a
// component adjacent; geodesics come from `dist`.
AffinityGraph graph_from(const std::vector<IndexList>& comps, std::size_t n, const Matrix& dist) {
  AffinityGraph g;
  g.n = n;
  g.adjacency.assign(n * n, 0);
  g.component_of.resize(n);
  g.local_index.resize(n);
  g.components = comps;
  for (std::size_t c = 0; c < comps.size(); ++c)
    for (std::size_t k = 0; k < comps[c].size(); ++k) {
      g.component_of[comps[c][k]] = c;
      g.local_index[comps[c][k]] = k;
      for (std::size_t j : comps[c]) g.adjacency[comps[c][k] * n + j] = 1;
    }
  geodesic_distances(g, dist);
  return g;
}

Matrix line_distances(const std::vector<double>& x) {
  const auto n = static_cast<Eigen::Index>(x.size());
  Matrix d(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) d(i, j) = std::abs(x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(j)]);
  return d;
}

ComponentStats stat(std::size_t id, double m, std::set<std::size_t> nb, std::size_t size = 1) {
  ComponentStats s;
  s.id = id;
  s.m_value = m;
  s.neighbors = std::move(nb);
  s.members.resize(size);
  return s;
}

// Stats with the given M values and neighbor sets, roles classified.
std::vector<ComponentStats> roles_for(std::vector<double> ms, std::vector<std::set<std::size_t>> nbs) {
  std::vector<ComponentStats> out;
  for (std::size_t i = 0; i < ms.size(); ++i) out.push_back(stat(i, ms[i], nbs[i]));
  classify_roles(out);
  return out;
}

}  // namespace

TEST_CASE("intra distance") {
  const Matrix d = line_distances({0.0, 3.5});
  const auto g = graph_from({{0, 1}}, 2, d);
  CHECK(intra_dis({0, 1}, g) == doctest::Approx(3.5));
  CHECK(intra_dis({0}, graph_from({{0}, {1}}, 2, d)) == 0.0);

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0, 10);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> x(4);
    for (auto& v : x) v = u(rng);
    const Matrix dist = line_distances(x);
    const auto g4 = graph_from({{0, 1, 2, 3}}, 4, dist);
    double sum = 0;
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b) sum += dist(a, b);
    CHECK(intra_dis({0, 1, 2, 3}, g4) == doctest::Approx(sum / 6.0));
  }
}

TEST_CASE("inter distance") {
  // Component {1,2} sits between outsiders at distance 1.
  const Matrix d = line_distances({0, 1, 2, 3});
  const auto g = graph_from({{0}, {1, 2}, {3}}, 4, d);
  CHECK(inter_dis({1, 2}, g, d) == doctest::Approx(1.0));
  CHECK(inter_dis({0}, g, d) == doctest::Approx(1.0));

  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0, 10);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> x(8);
    for (auto& v : x) v = u(rng);
    const Matrix dist = line_distances(x);
    const auto g8 = graph_from({{0, 1, 2}, {3, 4}, {5, 6, 7}}, 8, dist);
    double sum = 0;
    for (std::size_t p : {0, 1, 2}) {
      double best = 1e300;
      for (std::size_t q = 3; q < 8; ++q) best = std::min(best, dist(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q)));
      sum += best;
    }
    CHECK(inter_dis({0, 1, 2}, g8, dist) == doctest::Approx(sum / 3.0));
  }
}

TEST_CASE("separation measure and its gate") {
  CHECK(measure_m(1, 0.0, 5.0, 2) == 0.0);
  CHECK(measure_m(10, 1.0, 2.0, 8) == 2.0);
  CHECK(measure_m(10, 0.0, 2.0, 8) == 2.0 / kIntraFloor);
  CHECK(measure_m(5, 1.0, 2.0, 20) == 0.0);
  CHECK(measure_m(6, 1.0, 2.0, 20) == 2.0);
}

TEST_CASE("neighbor examples") {
  const Matrix d = line_distances({0, 1, 5, 6});
  const auto g = graph_from({{0, 1}, {2, 3}}, 4, d);
  const auto nb = neighbor_map(g, d);
  CHECK(nb[0] == std::set<std::size_t>{1});
  CHECK(nb[1] == std::set<std::size_t>{0});

  // Singleton 2 is nearest to point 1 (component 0); the tie at distance 2 goes to the lower index.
  const Matrix t = line_distances({0, 1, 3, 5});
  const auto g3 = graph_from({{0, 1}, {2}, {3}}, 4, t);
  CHECK(neighbor_map(g3, t)[1] == std::set<std::size_t>{0});
}

TEST_CASE("roles") {
  auto s = roles_for({5, 1, 2}, {{1, 2}, {0}, {0}});
  CHECK(s[0].role == ComponentRole::PCC);
  s = roles_for({2, 5, 1}, {{1, 2}, {0}, {0}});
  CHECK(s[0].role == ComponentRole::HCC);
  s = roles_for({2, 5, 6}, {{1, 2}, {0}, {0}});
  CHECK(s[0].role == ComponentRole::OTHER);
  CHECK(std::string(role_name(ComponentRole::HCC)) == "HCC");
}

TEST_CASE("center selection") {
  // Component 0 beats three of the other four.
  auto s = roles_for({5, 1, 2, 3, 9}, {{1, 2, 3}, {0}, {0}, {0}, {3}});
  CHECK(s[0].role == ComponentRole::PCC);
  auto centers = select_centers(s);
  CHECK(std::find(centers.begin(), centers.end(), 0) != centers.end());

  // Component 0 is a local peak but beats only one of the others.
  s = roles_for({2, 1, 7, 8, 9}, {{1}, {0}, {3}, {4}, {3}});
  CHECK(s[0].role == ComponentRole::PCC);
  centers = select_centers(s);
  CHECK(std::find(centers.begin(), centers.end(), 0) == centers.end());

  std::vector<ComponentStats> lone{stat(0, 0.0, {})};
  CHECK(select_centers(lone) == std::vector<std::size_t>{0});
}

TEST_CASE("growth") {
  auto s = roles_for({5, 2}, {{1}, {0}});
  s[0].members = {0};
  s[1].members = {1};
  auto r = grow_clusters(s, {0}, 2);
  CHECK(r.assignment == std::vector<int>{0, 0});
  CHECK(r.n_assigned == 2);

  // A higher-M neighbor is not absorbed.
  std::vector<ComponentStats> up{stat(0, 5, {1}), stat(1, 7, {0})};
  up[0].role = ComponentRole::PCC;
  up[1].role = ComponentRole::HCC;
  up[0].members = {0};
  up[1].members = {1};
  r = grow_clusters(up, {0}, 2);
  CHECK(r.assignment == std::vector<int>{0, kUnassigned});

  // A lower-M neighbor that is not an HCC is not absorbed.
  std::vector<ComponentStats> other{stat(0, 5, {1}), stat(1, 2, {0})};
  other[0].role = ComponentRole::PCC;
  other[1].role = ComponentRole::OTHER;
  other[0].members = {0};
  other[1].members = {1};
  r = grow_clusters(other, {0}, 2);
  CHECK(r.assignment == std::vector<int>{0, kUnassigned});
}

TEST_CASE("pipeline stats on random data: gate, neighbors, exclusive clusters, relabeling") {
  std::mt19937_64 rng(44);
  for (int trial = 0; trial < 12; ++trial) {
    const auto ds = testutil::random_dataset(80 + rng() % 80, 2, rng);
    const std::size_t delta = 6 + rng() % 20;
    ForestBuilder builder(ds);
    const auto h = builder.experiment_h(delta, rng());
    auto g = build_affinity(ds, h);
    const Matrix dist = embedding_distances(embed(ds, h));
    geodesic_distances(g, dist);
    const auto stats = component_stats(g, dist, delta);
    const double gate = std::max(1.0, static_cast<double>(delta) / 4.0);
    for (const auto& s : stats) {
      CHECK((s.m_value == 0.0) == (static_cast<double>(s.members.size()) <= gate || s.inter_dis == 0.0));
      CHECK(s.neighbors.count(s.id) == 0);
    }
    const auto centers = select_centers(stats);
    const auto result = grow_clusters(stats, centers, ds.size());
    // Each component maps to one cluster id (or none).
    for (const auto& s : stats)
      for (std::size_t i : s.members) CHECK(result.assignment[i] == result.assignment[s.members.front()]);
    std::size_t assigned = 0;
    for (int a : result.assignment) {
      assigned += a != kUnassigned;
      CHECK(a < static_cast<int>(result.centers.size()));
    }
    CHECK(assigned == result.n_assigned);

    // Renumber the components and rerun: the point partition is unchanged.
    std::vector<std::size_t> perm(stats.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<ComponentStats> shuffled(stats.size());
    for (const auto& s : stats) {
      auto t = s;
      t.id = perm[s.id];
      t.neighbors.clear();
      for (std::size_t nb : s.neighbors) t.neighbors.insert(perm[nb]);
      shuffled[t.id] = t;
    }
    classify_roles(shuffled);
    const auto again = grow_clusters(shuffled, select_centers(shuffled), ds.size());
    CHECK(testutil::ari_pair_counting(result.assignment, again.assignment) == 1.0);
    CHECK(again.n_assigned == result.n_assigned);
  }
}
