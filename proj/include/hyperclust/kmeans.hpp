#pragma once

#include <cstdint>
#include <vector>

#include "hyperclust/common.hpp"

namespace hyperclust {

struct KMeansOptions {
  std::size_t max_iter = 100;
  // Stop once the relative inertia change drops below this.
  double tol = 1e-6;
  // Throw NumericError if an iteration ever raises the inertia.
  bool verify_monotone = false;
};

struct KMeansModel {
  Matrix centroids;
  std::vector<int> labels;
  double inertia = 0.0;
  // Inertia after every assignment step; non-increasing.
  std::vector<double> inertia_trace;
  std::size_t iterations = 0;
};

// Lloyd iterations. For k = 2 the first centroid is a seeded random point and
// the second the point farthest from it; larger k uses distance-weighted
// seeding; one-dimensional input with k = 2 starts from the exact optimal
// split instead. Empty clusters are reseeded with the point farthest from its
// centroid, so every id in [0,k) is used. Throws DataError when m < k.
KMeansModel kmeans(const Matrix& points, std::size_t k, std::uint64_t seed, const KMeansOptions& options = {});

// Exact two-group split of scalars minimizing within-group squared error.
// Returns a 0/1 label per value (1 = the group with the larger mean).
std::vector<int> split_scalars_two_means(const std::vector<double>& values);

}  // namespace hyperclust
