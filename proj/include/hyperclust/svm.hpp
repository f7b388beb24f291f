#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hyperclust/common.hpp"

namespace hyperclust {

// Linear separator w.x + b = 0. `affiliated` holds the indices of the points
// whose split produced the plane, sorted ascending.
struct Hyperplane {
  Vector w;
  double b = 0.0;
  double norm_w = 0.0;
  IndexList affiliated;
  std::size_t id = 0;
  // Id of the plane whose split produced the affiliated set; -1 at a root.
  std::int64_t parent = -1;

  template <typename Row>
  double activation(const Row& x) const {
    return x.dot(w) + b;
  }
  bool is_affiliated(std::size_t point) const;
};

struct SvmOptions {
  double c = 100.0;
  // Maximal KKT violation accepted at convergence.
  double tol = 1e-4;
  // 0 selects max(10^6, 1000 m).
  std::size_t max_iter = 0;
};

struct SvmDiagnostics {
  std::size_t iterations = 0;
  bool converged = false;
  double dual_objective = 0.0;
  std::size_t support_vectors = 0;
};

// Soft-margin linear SVM in canonical form, solved in the dual with
// pairwise (SMO) updates so the bias stays explicit. `labels` are -1/+1.
// Throws DataError for fewer than two points or a single class, and
// NumericError("degenerate split") when the optimal w is zero.
Hyperplane train_linear_svm(const Matrix& points, std::span<const int> labels, const SvmOptions& options = {},
                            SvmDiagnostics* diagnostics = nullptr);

}  // namespace hyperclust
