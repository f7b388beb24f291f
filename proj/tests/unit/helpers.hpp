#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <vector>

#include "hyperclust/dataset.hpp"

namespace testutil {

using hyperclust::Dataset;
using hyperclust::Matrix;

inline Dataset make_dataset(const std::vector<std::vector<double>>& rows) {
  Dataset ds;
  const auto d = rows.empty() ? 0 : rows.front().size();
  ds.points.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(d));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < d; ++c) ds.points(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  return ds;
}

inline Dataset random_dataset(std::size_t n, std::size_t d, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  Dataset ds;
  ds.points.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (Eigen::Index r = 0; r < ds.points.rows(); ++r)
    for (Eigen::Index c = 0; c < ds.points.cols(); ++c) ds.points(r, c) = g(rng);
  return ds;
}

// A few Gaussian blobs in the plane, labelled by blob.
inline Dataset blobs(std::size_t per_blob, const std::vector<std::pair<double, double>>& centres, double spread,
                     std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, spread);
  Dataset ds;
  ds.points.resize(static_cast<Eigen::Index>(per_blob * centres.size()), 2);
  std::vector<int> labels;
  Eigen::Index r = 0;
  for (std::size_t b = 0; b < centres.size(); ++b)
    for (std::size_t i = 0; i < per_blob; ++i, ++r) {
      ds.points(r, 0) = centres[b].first + g(rng);
      ds.points(r, 1) = centres[b].second + g(rng);
      labels.push_back(static_cast<int>(b));
    }
  ds.truth_labels = labels;
  return ds;
}

inline std::vector<int> random_labels(std::size_t n, int classes, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, classes - 1);
  std::vector<int> out(n);
  for (auto& v : out) v = pick(rng);
  return out;
}

// Adjusted Rand index by explicit enumeration of point pairs.
inline double ari_pair_counting(const std::vector<int>& a, const std::vector<int>& b) {
  const std::size_t n = a.size();
  double both = 0, in_a = 0, in_b = 0, pairs = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool sa = a[i] == a[j];
      const bool sb = b[i] == b[j];
      both += sa && sb;
      in_a += sa;
      in_b += sb;
      pairs += 1;
    }
  if (pairs == 0) return 1.0;  // a single point: every partition agrees
  const double expected = in_a * in_b / pairs;
  const double max_index = 0.5 * (in_a + in_b);
  if (max_index == expected) {
    // Same partition up to relabeling?
    return (in_a == both && in_b == both) ? 1.0 : 0.0;
  }
  return (both - expected) / (max_index - expected);
}

// NMI from raw counts: H(U), H(V), I(U;V) with natural logs.
inline double nmi_entropy(const std::vector<int>& a, const std::vector<int>& b, bool geometric = false) {
  const double n = static_cast<double>(a.size());
  std::map<int, double> pa, pb;
  std::map<std::pair<int, int>, double> pab;
  for (std::size_t i = 0; i < a.size(); ++i) {
    pa[a[i]] += 1;
    pb[b[i]] += 1;
    pab[{a[i], b[i]}] += 1;
  }
  double ha = 0, hb = 0, mi = 0;
  for (auto& [k, c] : pa) ha -= c / n * std::log(c / n);
  for (auto& [k, c] : pb) hb -= c / n * std::log(c / n);
  for (auto& [k, c] : pab) mi += c / n * std::log((c / n) / ((pa[k.first] / n) * (pb[k.second] / n)));
  if (ha == 0 && hb == 0) return 1.0;
  if (ha == 0 || hb == 0) return 0.0;
  return mi / (geometric ? std::sqrt(ha * hb) : 0.5 * (ha + hb));
}

// Minimal within-group squared error over every 2-partition of 1-D values.
inline double best_two_partition_inertia(const std::vector<double>& v, std::vector<int>* best_labels = nullptr) {
  const std::size_t n = v.size();
  double best = std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 1; mask + 1 < (1u << n); ++mask) {
    double s[2] = {0, 0}, c[2] = {0, 0};
    for (std::size_t i = 0; i < n; ++i) {
      const int g = (mask >> i) & 1u;
      s[g] += v[i];
      c[g] += 1;
    }
    double inertia = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const int g = (mask >> i) & 1u;
      const double m = s[g] / c[g];
      inertia += (v[i] - m) * (v[i] - m);
    }
    if (inertia < best - 1e-15) {
      best = inertia;
      if (best_labels) {
        best_labels->assign(n, 0);
        for (std::size_t i = 0; i < n; ++i) (*best_labels)[i] = (mask >> i) & 1u;
      }
    }
  }
  return best;
}

// Largest geometric margin of a separable 2-D labelling. The optimal direction
// is normal to, or along, the segment between two points, so every pair is a
// candidate. Returns 0 when no candidate separates.
inline double max_margin_2d(const Matrix& x, const std::vector<int>& y) {
  const auto n = x.rows();
  double best = 0.0;
  auto evaluate = [&](double ux, double uy) {
    const double len = std::hypot(ux, uy);
    if (len < 1e-15) return;
    ux /= len;
    uy /= len;
    double lo_pos = std::numeric_limits<double>::infinity();
    double hi_neg = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
      const double p = ux * x(i, 0) + uy * x(i, 1);
      if (y[static_cast<std::size_t>(i)] > 0)
        lo_pos = std::min(lo_pos, p);
      else
        hi_neg = std::max(hi_neg, p);
    }
    best = std::max(best, 0.5 * (lo_pos - hi_neg));
  };
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double dx = x(j, 0) - x(i, 0);
      const double dy = x(j, 1) - x(i, 1);
      for (int s : {1, -1}) {
        evaluate(s * dx, s * dy);
        evaluate(-s * dy, s * dx);
      }
    }
  return best;
}

}  // namespace testutil
