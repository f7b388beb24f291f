#pragma once

#include <span>
#include <utility>
#include <vector>

#include "hyperclust/measure.hpp"

namespace hyperclust {

// Co-occurrence counts between truth classes (rows) and predicted clusters
// (columns). Labels are densified in order of first appearance.
struct Contingency {
  std::vector<std::vector<long long>> counts;
  std::vector<long long> row_sums;
  std::vector<long long> col_sums;
  long long n = 0;
};

Contingency contingency(std::span<const int> truth, std::span<const int> pred);

// Hubert-Arabie adjusted Rand index. When the expected index equals its
// maximum, returns 1 for identical partitions and 0 otherwise.
double ari(std::span<const int> truth, std::span<const int> pred);

enum class NmiNormalization { arithmetic, geometric };

// Mutual information (natural log) over a mean of the two entropies.
double nmi(std::span<const int> truth, std::span<const int> pred, NmiNormalization norm = NmiNormalization::arithmetic);

enum class MetricMode {
  // Unassigned points become fresh singleton clusters.
  full,
  // Only assigned points are scored.
  assigned_only,
};

const char* metric_mode_name(MetricMode mode);

// Prepares (truth, pred) for scoring under `mode`. Throws DataError on a
// length mismatch, or "empty restriction" when nothing is assigned.
std::pair<std::vector<int>, std::vector<int>> restrict_assigned(std::span<const int> truth, std::span<const int> assignment,
                                                                MetricMode mode);

}  // namespace hyperclust
