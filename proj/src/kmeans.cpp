#include "hyperclust/kmeans.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>

#include <fmt/format.h>

namespace hyperclust {
namespace {

using Index = Eigen::Index;

Matrix init_centroids(const Matrix& points, std::size_t k, std::mt19937_64& rng) {
  const Index m = points.rows();
  Matrix centroids(static_cast<Index>(k), points.cols());
  std::uniform_int_distribution<Index> pick(0, m - 1);
  centroids.row(0) = points.row(pick(rng));

  // Squared distance of every point to its nearest chosen centroid.
  Vector nearest = (points.rowwise() - centroids.row(0)).rowwise().squaredNorm();
  for (std::size_t c = 1; c < k; ++c) {
    Index next = 0;
    if (k == 2) {
      nearest.maxCoeff(&next);
    } else if (nearest.sum() > 0.0) {
      std::discrete_distribution<Index> weighted(nearest.data(), nearest.data() + nearest.size());
      next = weighted(rng);
    } else {
      next = pick(rng);
    }
    centroids.row(static_cast<Index>(c)) = points.row(next);
    nearest = nearest.cwiseMin((points.rowwise() - centroids.row(static_cast<Index>(c))).rowwise().squaredNorm());
  }
  return centroids;
}

// Returns total squared distance; fills labels and per-point costs.
double assign(const Matrix& points, const Matrix& centroids, std::vector<int>& labels, Vector& cost) {
  double total = 0.0;
  for (Index i = 0; i < points.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    int best_c = 0;
    for (Index c = 0; c < centroids.rows(); ++c) {
      const double d = (points.row(i) - centroids.row(c)).squaredNorm();
      if (d < best) {
        best = d;
        best_c = static_cast<int>(c);
      }
    }
    labels[static_cast<std::size_t>(i)] = best_c;
    cost[i] = best;
    total += best;
  }
  return total;
}

// Moves the point farthest from its centroid into each empty cluster.
void repair_empty(const Matrix& points, Matrix& centroids, std::vector<int>& labels, Vector& cost) {
  const auto k = static_cast<std::size_t>(centroids.rows());
  std::vector<std::size_t> counts(k, 0);
  for (int l : labels) ++counts[static_cast<std::size_t>(l)];
  for (std::size_t c = 0; c < k; ++c) {
    if (counts[c] != 0) continue;
    Index donor = -1;
    for (Index i = 0; i < points.rows(); ++i) {
      if (counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])] < 2) continue;
      if (donor < 0 || cost[i] > cost[donor]) donor = i;
    }
    if (donor < 0) continue;  // unreachable when m >= k
    --counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(donor)])];
    labels[static_cast<std::size_t>(donor)] = static_cast<int>(c);
    ++counts[c];
    centroids.row(static_cast<Index>(c)) = points.row(donor);
    cost[donor] = 0.0;
  }
}

void update_means(const Matrix& points, const std::vector<int>& labels, Matrix& centroids) {
  std::vector<std::size_t> counts(static_cast<std::size_t>(centroids.rows()), 0);
  centroids.setZero();
  for (Index i = 0; i < points.rows(); ++i) {
    const int l = labels[static_cast<std::size_t>(i)];
    centroids.row(l) += points.row(i);
    ++counts[static_cast<std::size_t>(l)];
  }
  for (Index c = 0; c < centroids.rows(); ++c)
    if (counts[static_cast<std::size_t>(c)] > 0) centroids.row(c) /= static_cast<double>(counts[static_cast<std::size_t>(c)]);
}

}  // namespace

KMeansModel kmeans(const Matrix& points, std::size_t k, std::uint64_t seed, const KMeansOptions& options) {
  if (k == 0) throw DataError("k-means needs k >= 1");
  if (static_cast<std::size_t>(points.rows()) < k)
    throw DataError(fmt::format("k-means needs at least k={} points, got {}", k, points.rows()));

  std::mt19937_64 rng(seed);
  KMeansModel model;
  model.centroids = init_centroids(points, k, rng);
  if (k == 2 && points.cols() == 1) {
    // Scalars: start from the exact optimal split, which Lloyd leaves in place.
    const std::vector<double> values(points.data(), points.data() + points.rows());
    const auto groups = split_scalars_two_means(values);
    double sum[2] = {0.0, 0.0};
    std::size_t count[2] = {0, 0};
    for (std::size_t i = 0; i < values.size(); ++i) {
      sum[groups[i]] += values[i];
      ++count[groups[i]];
    }
    if (count[0] > 0 && count[1] > 0)
      for (int g = 0; g < 2; ++g) model.centroids(g, 0) = sum[g] / static_cast<double>(count[g]);
  }
  model.labels.assign(static_cast<std::size_t>(points.rows()), 0);
  Vector cost(points.rows());

  const std::size_t max_iter = std::max<std::size_t>(options.max_iter, 1);
  for (std::size_t it = 0; it < max_iter; ++it) {
    assign(points, model.centroids, model.labels, cost);
    repair_empty(points, model.centroids, model.labels, cost);
    const double inertia = cost.sum();
    if (options.verify_monotone && it > 0 && inertia > model.inertia_trace.back() * (1.0 + 1e-12) + 1e-300)
      throw NumericError(fmt::format("k-means inertia rose from {} to {}", model.inertia_trace.back(), inertia));
    model.inertia_trace.push_back(inertia);
    update_means(points, model.labels, model.centroids);
    model.iterations = it + 1;
    if (it > 0) {
      const double prev = model.inertia_trace[it - 1];
      if (prev <= 0.0 || (prev - inertia) <= options.tol * prev) break;
    }
  }
  model.inertia = 0.0;
  for (Index i = 0; i < points.rows(); ++i)
    model.inertia += (points.row(i) - model.centroids.row(model.labels[static_cast<std::size_t>(i)])).squaredNorm();
  return model;
}

std::vector<int> split_scalars_two_means(const std::vector<double>& values) {
  const std::size_t m = values.size();
  std::vector<int> labels(m, 0);
  if (m < 2) return labels;

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  std::vector<double> sum(m + 1, 0.0), sq(m + 1, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const double v = values[order[i]];
    sum[i + 1] = sum[i] + v;
    sq[i + 1] = sq[i] + v * v;
  }
  auto sse = [&](std::size_t lo, std::size_t hi) {
    const double cnt = static_cast<double>(hi - lo);
    const double s = sum[hi] - sum[lo];
    return std::max(0.0, (sq[hi] - sq[lo]) - s * s / cnt);
  };
  std::size_t best_split = 1;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t s = 1; s < m; ++s) {
    const double total = sse(0, s) + sse(s, m);
    if (total < best) {
      best = total;
      best_split = s;
    }
  }
  for (std::size_t i = best_split; i < m; ++i) labels[order[i]] = 1;
  return labels;
}

}  // namespace hyperclust
