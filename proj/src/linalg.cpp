#include "steinitz/linalg.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <functional>

#include "steinitz/errors.hpp"
#include "steinitz/kernels.hpp"

namespace steinitz {

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionMismatch("ragged matrix literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> d) {
  Matrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

Matrix Matrix::from_rows(const std::vector<Vector>& rows) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  Matrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw DimensionMismatch("ragged matrix rows");
    std::copy(rows[r].begin(), rows[r].end(), m.row(r).begin());
  }
  return m;
}

Vector Matrix::column(std::size_t c) const {
  Vector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw DimensionMismatch("matrix product shape mismatch");
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      kernels::axpy(aik, b.row(k), out.row(i));
    }
  return out;
}

Vector operator*(const Matrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) throw DimensionMismatch("matrix-vector shape mismatch");
  Vector y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) y[i] = kernels::dot(a.row(i), x);
  return y;
}

double norm2(std::span<const double> x) { return std::sqrt(kernels::dot(x, x)); }

Vector add(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  Vector out(a.begin(), a.end());
  kernels::axpy(1.0, b, out);
  return out;
}

Vector subtract(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  Vector out(a.begin(), a.end());
  kernels::axpy(-1.0, b, out);
  return out;
}

Vector scaled(std::span<const double> a, double s) {
  Vector out(a.begin(), a.end());
  for (double& x : out) x *= s;
  return out;
}

Vector jacobi_singular_values(const Matrix& a_in) {
  const Matrix a = a_in.cols() > a_in.rows() ? a_in.transpose() : a_in;
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  std::vector<Vector> col(n);
  for (std::size_t j = 0; j < n; ++j) col[j] = a.column(j);

  constexpr double tol = 1e-14;
  constexpr int max_sweeps = 60;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double alpha = kernels::dot(col[i], col[i]);
        const double beta = kernels::dot(col[j], col[j]);
        const double gamma = kernels::dot(col[i], col[j]);
        if (alpha == 0.0 || beta == 0.0) continue;
        if (std::abs(gamma) <= tol * std::sqrt(alpha * beta)) continue;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::hypot(1.0, zeta));
        const double c = 1.0 / std::hypot(1.0, t);
        const double s = c * t;
        kernels::rotate(col[i], col[j], c, s);
        rotated = true;
      }
    }
    if (!rotated) break;
  }

  Vector sv(n);
  for (std::size_t j = 0; j < n; ++j) sv[j] = norm2(col[j]);
  std::sort(sv.begin(), sv.end(), std::greater<>());
  sv.resize(std::min(m, n));
  return sv;
}

double determinant(Matrix a) {
  if (a.rows() != a.cols()) throw DimensionMismatch("determinant of non-square matrix");
  const std::size_t n = a.rows();
  double det = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t r = k + 1; r < n; ++r)
      if (std::abs(a(r, k)) > std::abs(a(p, k))) p = r;
    if (a(p, k) == 0.0) return 0.0;
    if (p != k) {
      std::swap_ranges(a.row(p).begin(), a.row(p).end(), a.row(k).begin());
      det = -det;
    }
    det *= a(k, k);
    for (std::size_t r = k + 1; r < n; ++r) {
      const double f = a(r, k) / a(k, k);
      if (f != 0.0) kernels::axpy(-f, a.row(k), a.row(r));
    }
  }
  return det;
}

bool solve(Matrix a, Vector b, Vector& x, double pivot_tol) {
  if (a.rows() != a.cols() || b.size() != a.rows())
    throw DimensionMismatch("solve: shape mismatch");
  const std::size_t n = a.rows();
  double scale = 0.0;
  for (double v : a.data()) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return n == 0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t r = k + 1; r < n; ++r)
      if (std::abs(a(r, k)) > std::abs(a(p, k))) p = r;
    if (std::abs(a(p, k)) <= pivot_tol * scale) return false;
    if (p != k) {
      std::swap_ranges(a.row(p).begin(), a.row(p).end(), a.row(k).begin());
      std::swap(b[p], b[k]);
    }
    for (std::size_t r = k + 1; r < n; ++r) {
      const double f = a(r, k) / a(k, k);
      if (f == 0.0) continue;
      kernels::axpy(-f, a.row(k), a.row(r));
      b[r] -= f * b[k];
    }
  }
  x.assign(n, 0.0);
  for (std::size_t k = n; k-- > 0;) {
    double s = b[k];
    for (std::size_t c = k + 1; c < n; ++c) s -= a(k, c) * x[c];
    x[k] = s / a(k, k);
  }
  return true;
}

std::vector<Vector> canonical_basis(const std::vector<Vector>& vectors, std::size_t dim,
                                    double tol) {
  std::vector<Vector> rows;
  double scale = 0.0;
  for (const Vector& v : vectors) {
    if (v.size() != dim) throw DimensionMismatch("canonical_basis: vector length");
    rows.push_back(v);
    for (double x : v) scale = std::max(scale, std::abs(x));
  }
  if (scale == 0.0) return {};

  // Reduced row echelon form.
  std::size_t rank = 0;
  for (std::size_t c = 0; c < dim && rank < rows.size(); ++c) {
    std::size_t p = rank;
    for (std::size_t r = rank + 1; r < rows.size(); ++r)
      if (std::abs(rows[r][c]) > std::abs(rows[p][c])) p = r;
    if (std::abs(rows[p][c]) <= tol * scale) {
      for (std::size_t r = rank; r < rows.size(); ++r) rows[r][c] = 0.0;
      continue;
    }
    std::swap(rows[p], rows[rank]);
    const double pivot = rows[rank][c];
    for (double& x : rows[rank]) x /= pivot;
    rows[rank][c] = 1.0;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank) continue;
      const double f = rows[r][c];
      if (f == 0.0) continue;
      kernels::axpy(-f, rows[rank], rows[r]);
      rows[r][c] = 0.0;
    }
    ++rank;
  }
  rows.resize(rank);

  // Gram-Schmidt, twice for stability.
  std::vector<Vector> basis;
  for (Vector v : rows) {
    for (int pass = 0; pass < 2; ++pass)
      for (const Vector& b : basis) kernels::axpy(-kernels::dot(v, b), b, v);
    const double nv = norm2(v);
    for (double& x : v) x /= nv;
    for (double x : v) {
      if (std::abs(x) > 1e-12) {
        if (x < 0.0)
          for (double& y : v) y = -y;
        break;
      }
    }
    for (double& x : v)
      if (x == 0.0) x = 0.0;  // drop negative zeros
    basis.push_back(std::move(v));
  }
  return basis;
}

std::vector<Vector> orthogonal_complement(const std::vector<Vector>& basis, std::size_t dim,
                                          double tol) {
  std::vector<Vector> spanning;
  for (std::size_t i = 0; i < dim; ++i) {
    Vector e(dim, 0.0);
    e[i] = 1.0;
    for (int pass = 0; pass < 2; ++pass)
      for (const Vector& b : basis) kernels::axpy(-kernels::dot(e, b), b, e);
    spanning.push_back(std::move(e));
  }
  return canonical_basis(spanning, dim, tol);
}

std::size_t numerical_rank(const Matrix& a, double rel_tol) {
  const Vector sv = jacobi_singular_values(a);
  if (sv.empty() || sv.front() == 0.0) return 0;
  std::size_t r = 0;
  for (double s : sv)
    if (s > rel_tol * sv.front()) ++r;
  return r;
}

}  // namespace steinitz
