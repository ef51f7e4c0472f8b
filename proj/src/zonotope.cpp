#include "steinitz/zonotope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "steinitz/errors.hpp"
#include "steinitz/kernels.hpp"

namespace steinitz {

std::vector<std::size_t> fractional_indices(std::span<const double> lambda, double tol) {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < lambda.size(); ++k)
    if (lambda[k] > tol && lambda[k] < 1.0 - tol) out.push_back(k);
  return out;
}

namespace {

// Columns: s zonotope generators with bounds [0,1], then d surplus columns -e_i
// and d slack columns +e_i, both in [0, inf) with unit cost.
class BoundedSimplex {
 public:
  BoundedSimplex(std::vector<Vector> cols, Vector b)
      : s_(cols.size()), d_(b.size()), cols_(std::move(cols)), b_(std::move(b)) {}

  ZonotopeFit run() {
    const std::size_t n = s_ + 2 * d_;
    at_upper_.assign(n, 0);
    basis_.resize(d_);
    for (std::size_t i = 0; i < d_; ++i) basis_[i] = b_[i] >= 0.0 ? s_ + d_ + i : s_ + i;

    double col_scale = 1.0;
    for (const Vector& c : cols_)
      for (double x : c) col_scale = std::max(col_scale, std::abs(x));

    std::vector<char> in_basis(n, 0);
    Vector xb, y, alpha, col(d_);
    std::size_t degenerate_run = 0;
    std::size_t it = 0;
    const std::size_t max_iterations = 50 * n + 1000;
    for (; it < max_iterations; ++it) {
      std::fill(in_basis.begin(), in_basis.end(), 0);
      for (std::size_t j : basis_) in_basis[j] = 1;
      basic_values(xb);

      Matrix bt(d_, d_);
      Vector cb(d_);
      for (std::size_t k = 0; k < d_; ++k) {
        column(basis_[k], col);
        for (std::size_t i = 0; i < d_; ++i) bt(k, i) = col[i];
        cb[k] = cost(basis_[k]);
      }
      if (!solve(bt, cb, y, 0.0)) throw Error("zonotope_fit: singular basis");

      double ymax = 0.0;
      for (double v : y) ymax = std::max(ymax, std::abs(v));
      const double price_tol = 1e-12 * (1.0 + ymax * col_scale);
      const bool bland = degenerate_run > n;
      std::size_t entering = n;
      double best_gain = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (in_basis[j]) continue;
        column(j, col);
        const double r = cost(j) - kernels::dot(y, col);
        double gain = 0.0;
        if (!at_upper_[j] && r < -price_tol) gain = -r;
        if (at_upper_[j] && r > price_tol) gain = r;
        if (gain <= 0.0) continue;
        if (bland) {
          entering = j;
          break;
        }
        if (gain > best_gain) {
          best_gain = gain;
          entering = j;
        }
      }
      if (entering == n) break;

      const double dir = at_upper_[entering] ? -1.0 : 1.0;
      column(entering, col);
      if (!solve(basis_matrix(), col, alpha, 0.0)) throw Error("zonotope_fit: singular basis");
      double theta = upper(entering);
      std::size_t leave = d_;
      bool leave_to_upper = false;
      for (std::size_t k = 0; k < d_; ++k) {
        const double delta = -dir * alpha[k];
        double lim;
        bool to_upper;
        if (delta < -1e-13) {
          lim = xb[k] / -delta;
          to_upper = false;
        } else if (delta > 1e-13 && std::isfinite(upper(basis_[k]))) {
          lim = (upper(basis_[k]) - xb[k]) / delta;
          to_upper = true;
        } else {
          continue;
        }
        lim = std::max(lim, 0.0);
        if (lim < theta || (lim == theta && leave < d_ && basis_[k] < basis_[leave])) {
          theta = lim;
          leave = k;
          leave_to_upper = to_upper;
        }
      }
      if (!std::isfinite(theta)) throw Error("zonotope_fit: unbounded direction");
      degenerate_run = theta < 1e-15 ? degenerate_run + 1 : 0;
      if (leave == d_) {
        at_upper_[entering] = !at_upper_[entering];
      } else {
        at_upper_[basis_[leave]] = leave_to_upper;
        basis_[leave] = entering;
        at_upper_[entering] = 0;
      }
    }

    ZonotopeFit fit;
    fit.iterations = it;
    fit.lambda.assign(s_, 0.0);
    for (std::size_t j = 0; j < s_; ++j) fit.lambda[j] = at_upper_[j] ? 1.0 : 0.0;
    basic_values(xb);
    for (std::size_t k = 0; k < d_; ++k) {
      if (basis_[k] >= s_) continue;
      double v = std::clamp(xb[k], 0.0, 1.0);
      if (v < 1e-13) v = 0.0;
      if (v > 1.0 - 1e-13) v = 1.0;
      fit.lambda[basis_[k]] = v;
    }
    Vector r(d_, 0.0);
    for (std::size_t j = 0; j < s_; ++j)
      if (fit.lambda[j] != 0.0) kernels::axpy(fit.lambda[j], cols_[j], r);
    for (std::size_t i = 0; i < d_; ++i) fit.residual_l1 += std::abs(r[i] - b_[i]);
    return fit;
  }

 private:
  double cost(std::size_t j) const { return j < s_ ? 0.0 : 1.0; }
  double upper(std::size_t j) const {
    return j < s_ ? 1.0 : std::numeric_limits<double>::infinity();
  }
  void column(std::size_t j, Vector& out) const {
    if (j < s_) {
      out = cols_[j];
      return;
    }
    out.assign(d_, 0.0);
    if (j < s_ + d_)
      out[j - s_] = -1.0;
    else
      out[j - s_ - d_] = 1.0;
  }
  Matrix basis_matrix() const {
    Matrix b(d_, d_);
    Vector col;
    for (std::size_t k = 0; k < d_; ++k) {
      column(basis_[k], col);
      for (std::size_t i = 0; i < d_; ++i) b(i, k) = col[i];
    }
    return b;
  }
  void basic_values(Vector& xb) const {
    Vector rhs = b_;
    for (std::size_t j = 0; j < s_; ++j)
      if (at_upper_[j]) kernels::axpy(-1.0, cols_[j], rhs);
    if (!solve(basis_matrix(), rhs, xb, 0.0)) throw Error("zonotope_fit: singular basis");
  }

  std::size_t s_;
  std::size_t d_;
  std::vector<Vector> cols_;
  Vector b_;
  std::vector<std::size_t> basis_;
  std::vector<char> at_upper_;
};

}  // namespace

ZonotopeFit zonotope_fit(const std::vector<Vector>& points, std::span<const double> target,
                         std::span<const double> row_scale) {
  const std::size_t d = target.size();
  if (d == 0) throw InvalidArgument("zonotope_fit: empty target");
  if (!row_scale.empty() && row_scale.size() != d)
    throw DimensionMismatch("zonotope_fit: row scale length");
  std::vector<Vector> cols;
  cols.reserve(points.size());
  for (const Vector& p : points) {
    if (p.size() != d) throw DimensionMismatch("zonotope_fit: point dimension");
    Vector c = p;
    if (!row_scale.empty())
      for (std::size_t i = 0; i < d; ++i) c[i] *= row_scale[i];
    cols.push_back(std::move(c));
  }
  Vector b(target.begin(), target.end());
  if (!row_scale.empty())
    for (std::size_t i = 0; i < d; ++i) b[i] *= row_scale[i];
  return BoundedSimplex(std::move(cols), std::move(b)).run();
}

}  // namespace steinitz
