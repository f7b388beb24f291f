#include "hyperclust/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace hyperclust {

bool Hyperplane::is_affiliated(std::size_t point) const {
  return std::binary_search(affiliated.begin(), affiliated.end(), point);
}

namespace {

constexpr double kTau = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Dual: min 1/2 a'Qa - e'a  s.t. 0 <= a <= C, y'a = 0, Q_ij = y_i y_j x_i.x_j.
// Working-set selection follows the second-order rule of Fan, Chen & Lin.
class SmoSolver {
 public:
  SmoSolver(const Matrix& points, std::span<const int> labels, const SvmOptions& options)
      : m_(points.rows()), c_(options.c), tol_(options.tol), y_(m_), alpha_(Vector::Zero(m_)), grad_(Vector::Constant(m_, -1.0)) {
    for (Eigen::Index i = 0; i < m_; ++i) y_[i] = labels[static_cast<std::size_t>(i)] > 0 ? 1.0 : -1.0;
    gram_ = points * points.transpose();
    max_iter_ = options.max_iter ? options.max_iter : std::max<std::size_t>(1000000, 1000 * static_cast<std::size_t>(m_));
  }

  void solve(SvmDiagnostics& diag) {
    std::size_t it = 0;
    for (; it < max_iter_; ++it) {
      Eigen::Index i = -1, j = -1;
      if (!select_pair(i, j)) {
        diag.converged = true;
        break;
      }
      update_pair(i, j);
    }
    diag.iterations = it;
    diag.dual_objective = -0.5 * alpha_.dot(grad_ - Vector::Ones(m_));
    diag.support_vectors = static_cast<std::size_t>((alpha_.array() > 0.0).count());
  }

  double bias() const {
    double ub = kInf, lb = -kInf, sum_free = 0.0;
    std::size_t n_free = 0;
    for (Eigen::Index i = 0; i < m_; ++i) {
      const double yg = y_[i] * grad_[i];
      if (alpha_[i] >= c_) {
        if (y_[i] < 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
      } else if (alpha_[i] <= 0.0) {
        if (y_[i] > 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
      } else {
        ++n_free;
        sum_free += yg;
      }
    }
    const double rho = n_free > 0 ? sum_free / static_cast<double>(n_free) : 0.5 * (ub + lb);
    return -rho;
  }

  Vector weights(const Matrix& points) const { return points.transpose() * (alpha_.array() * y_.array()).matrix(); }

 private:
  bool in_up(Eigen::Index t) const { return (y_[t] > 0 && alpha_[t] < c_) || (y_[t] < 0 && alpha_[t] > 0.0); }
  bool in_low(Eigen::Index t) const { return (y_[t] > 0 && alpha_[t] > 0.0) || (y_[t] < 0 && alpha_[t] < c_); }

  bool select_pair(Eigen::Index& out_i, Eigen::Index& out_j) const {
    double gmax = -kInf;
    Eigen::Index i = -1;
    for (Eigen::Index t = 0; t < m_; ++t)
      if (in_up(t) && -y_[t] * grad_[t] > gmax) {
        gmax = -y_[t] * grad_[t];
        i = t;
      }
    if (i < 0) return false;

    double gmin = kInf, best_obj = kInf;
    Eigen::Index j = -1;
    for (Eigen::Index t = 0; t < m_; ++t) {
      if (!in_low(t)) continue;
      const double yg = -y_[t] * grad_[t];
      gmin = std::min(gmin, yg);
      const double diff = gmax - yg;
      if (diff <= 0.0) continue;
      double quad = gram_(i, i) + gram_(t, t) - 2.0 * gram_(i, t);
      if (quad <= 0.0) quad = kTau;
      const double obj = -(diff * diff) / quad;
      if (obj < best_obj) {
        best_obj = obj;
        j = t;
      }
    }
    if (j < 0 || gmax - gmin < tol_) return false;
    out_i = i;
    out_j = j;
    return true;
  }

  void update_pair(Eigen::Index i, Eigen::Index j) {
    const double old_i = alpha_[i], old_j = alpha_[j];
    double quad = gram_(i, i) + gram_(j, j) - 2.0 * gram_(i, j);
    if (quad <= 0.0) quad = kTau;
    double ai = old_i, aj = old_j;
    if (y_[i] != y_[j]) {
      const double delta = (-grad_[i] - grad_[j]) / quad;
      const double diff = ai - aj;
      ai += delta;
      aj += delta;
      if (diff > 0.0) {
        if (aj < 0.0) { aj = 0.0; ai = diff; }
        if (ai > c_) { ai = c_; aj = c_ - diff; }
      } else {
        if (ai < 0.0) { ai = 0.0; aj = -diff; }
        if (aj > c_) { aj = c_; ai = c_ + diff; }
      }
    } else {
      const double delta = (grad_[i] - grad_[j]) / quad;
      const double sum = ai + aj;
      ai -= delta;
      aj += delta;
      if (sum > c_) {
        if (ai > c_) { ai = c_; aj = sum - c_; }
        if (aj > c_) { aj = c_; ai = sum - c_; }
      } else {
        if (aj < 0.0) { aj = 0.0; ai = sum; }
        if (ai < 0.0) { ai = 0.0; aj = sum; }
      }
    }
    alpha_[i] = ai;
    alpha_[j] = aj;
    const double di = (ai - old_i) * y_[i];
    const double dj = (aj - old_j) * y_[j];
    // grad_k += Q_ki dai + Q_kj daj, with Q_kt = y_k y_t K_kt.
    grad_.array() += y_.array() * (gram_.col(i).array() * di + gram_.col(j).array() * dj);
  }

  Eigen::Index m_;
  double c_;
  double tol_;
  std::size_t max_iter_ = 0;
  Vector y_;
  Vector alpha_;
  Vector grad_;
  Matrix gram_;
};

}  // namespace

Hyperplane train_linear_svm(const Matrix& points, std::span<const int> labels, const SvmOptions& options,
                            SvmDiagnostics* diagnostics) {
  if (points.rows() < 2) throw DataError("SVM training needs at least two points");
  if (labels.size() != static_cast<std::size_t>(points.rows()))
    throw DataError(fmt::format("SVM label count {} does not match {} points", labels.size(), points.rows()));
  if (!(options.c > 0.0)) throw DataError("SVM cost C must be positive");
  const bool has_pos = std::any_of(labels.begin(), labels.end(), [](int l) { return l > 0; });
  const bool has_neg = std::any_of(labels.begin(), labels.end(), [](int l) { return l <= 0; });
  if (!has_pos || !has_neg) throw DataError("SVM training needs both classes");

  SmoSolver solver(points, labels, options);
  SvmDiagnostics diag;
  solver.solve(diag);
  if (diagnostics) *diagnostics = diag;

  Hyperplane plane;
  plane.w = solver.weights(points);
  plane.norm_w = plane.w.norm();
  if (!(plane.norm_w > 1e-12) || !std::isfinite(plane.norm_w)) throw NumericError("degenerate split");
  plane.b = solver.bias();
  return plane;
}

}  // namespace hyperclust
