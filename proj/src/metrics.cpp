#include "hyperclust/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include <fmt/format.h>

namespace hyperclust {
namespace {

std::vector<std::size_t> densify(std::span<const int> labels, std::size_t& distinct) {
  std::unordered_map<int, std::size_t> ids;
  std::vector<std::size_t> out;
  out.reserve(labels.size());
  for (int l : labels) out.push_back(ids.try_emplace(l, ids.size()).first->second);
  distinct = ids.size();
  return out;
}

double comb2(long long x) { return 0.5 * static_cast<double>(x) * static_cast<double>(x - 1); }

// Terms are summed in sorted order so that relabeling either partition, or
// swapping the arguments, reproduces the result bit for bit.
double sorted_sum(std::vector<double> terms) {
  std::sort(terms.begin(), terms.end());
  double total = 0.0;
  for (double t : terms) total += t;
  return total;
}

double entropy(const std::vector<long long>& sums, double n) {
  std::vector<double> terms;
  for (long long s : sums)
    if (s > 0) {
      const double p = static_cast<double>(s) / n;
      terms.push_back(-p * std::log(p));
    }
  return sorted_sum(std::move(terms));
}

void check_lengths(std::span<const int> truth, std::span<const int> pred) {
  if (truth.size() != pred.size())
    throw DataError(fmt::format("label length mismatch: {} vs {}", truth.size(), pred.size()));
}

}  // namespace

Contingency contingency(std::span<const int> truth, std::span<const int> pred) {
  check_lengths(truth, pred);
  std::size_t r = 0, c = 0;
  const auto t = densify(truth, r);
  const auto p = densify(pred, c);
  Contingency table;
  table.counts.assign(r, std::vector<long long>(c, 0));
  table.row_sums.assign(r, 0);
  table.col_sums.assign(c, 0);
  for (std::size_t i = 0; i < t.size(); ++i) {
    ++table.counts[t[i]][p[i]];
    ++table.row_sums[t[i]];
    ++table.col_sums[p[i]];
  }
  table.n = static_cast<long long>(t.size());
  return table;
}

double ari(std::span<const int> truth, std::span<const int> pred) {
  check_lengths(truth, pred);
  if (truth.empty()) throw DataError("ARI of empty labelings");
  const Contingency table = contingency(truth, pred);
  double index = 0.0, sum_rows = 0.0, sum_cols = 0.0;
  for (const auto& row : table.counts)
    for (long long x : row) index += comb2(x);
  for (long long x : table.row_sums) sum_rows += comb2(x);
  for (long long x : table.col_sums) sum_cols += comb2(x);
  const double total = comb2(table.n);
  const double expected = total > 0.0 ? sum_rows * sum_cols / total : 0.0;
  const double max_index = 0.5 * (sum_rows + sum_cols);
  if (max_index - expected == 0.0) {
    // Both partitions trivial (all singletons or one block) or n < 2.
    const bool identical = table.row_sums.size() == table.col_sums.size() && index == sum_rows && index == sum_cols;
    return identical ? 1.0 : 0.0;
  }
  return (index - expected) / (max_index - expected);
}

double nmi(std::span<const int> truth, std::span<const int> pred, NmiNormalization norm) {
  check_lengths(truth, pred);
  if (truth.empty()) throw DataError("NMI of empty labelings");
  const Contingency table = contingency(truth, pred);
  const double n = static_cast<double>(table.n);
  const double hu = entropy(table.row_sums, n);
  const double hv = entropy(table.col_sums, n);
  if (hu == 0.0 && hv == 0.0) return 1.0;
  if (hu == 0.0 || hv == 0.0) return 0.0;
  std::vector<double> terms;
  for (std::size_t i = 0; i < table.counts.size(); ++i)
    for (std::size_t j = 0; j < table.counts[i].size(); ++j) {
      const long long x = table.counts[i][j];
      if (x == 0) continue;
      const double nij = static_cast<double>(x);
      terms.push_back(nij / n *
                      std::log(n * nij / (static_cast<double>(table.row_sums[i]) * static_cast<double>(table.col_sums[j]))));
    }
  const double mi = sorted_sum(std::move(terms));
  const double denom = norm == NmiNormalization::arithmetic ? 0.5 * (hu + hv) : std::sqrt(hu * hv);
  return std::clamp(mi / denom, 0.0, 1.0);
}

const char* metric_mode_name(MetricMode mode) { return mode == MetricMode::full ? "full" : "assigned_only"; }

std::pair<std::vector<int>, std::vector<int>> restrict_assigned(std::span<const int> truth, std::span<const int> assignment,
                                                                MetricMode mode) {
  check_lengths(truth, assignment);
  std::vector<int> t, p;
  if (mode == MetricMode::assigned_only) {
    for (std::size_t i = 0; i < truth.size(); ++i)
      if (assignment[i] != kUnassigned) {
        t.push_back(truth[i]);
        p.push_back(assignment[i]);
      }
    if (t.empty()) throw DataError("empty restriction");
    return {std::move(t), std::move(p)};
  }
  int fresh = 0;
  for (int a : assignment) fresh = std::max(fresh, a + 1);
  t.assign(truth.begin(), truth.end());
  p.reserve(assignment.size());
  for (int a : assignment) p.push_back(a == kUnassigned ? fresh++ : a);
  return {std::move(t), std::move(p)};
}

}  // namespace hyperclust
