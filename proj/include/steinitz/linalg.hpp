#pragma once
// Small dense linear algebra: just enough for desk-scale dimensions.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace steinitz {

using Vector = std::vector<double>;

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> d);
  // Rows given as equal-length vectors.
  static Matrix from_rows(const std::vector<Vector>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  Vector column(std::size_t c) const;
  const std::vector<double>& data() const { return data_; }

  Matrix transpose() const;
  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Vector operator*(const Matrix& a, std::span<const double> x);

double norm2(std::span<const double> x);
Vector add(std::span<const double> a, std::span<const double> b);
Vector subtract(std::span<const double> a, std::span<const double> b);
Vector scaled(std::span<const double> a, double s);

// Singular values by one-sided Jacobi (Hestenes) on the columns, sorted
// descending, length min(rows, cols). Sweeps stop once every pair satisfies
// |<a_i,a_j>| <= 1e-14 sqrt(|a_i|^2 |a_j|^2).
Vector jacobi_singular_values(const Matrix& a);

// Determinant by partial-pivot LU.
double determinant(Matrix a);

// Solves a x = b for square nonsingular a; returns false when a pivot falls
// below `pivot_tol` times the largest entry.
bool solve(Matrix a, Vector b, Vector& x, double pivot_tol = 1e-14);

// Orthonormal basis of span(vectors) in canonical form: reduced row echelon
// form (pivots relative to `tol`), Gram-Schmidt in pivot order, first nonzero
// coordinate positive. Two spanning sets of one subspace give the same basis
// up to rounding.
std::vector<Vector> canonical_basis(const std::vector<Vector>& vectors, std::size_t dim,
                                    double tol = 1e-10);

// Canonical orthonormal basis of the orthogonal complement of span(basis).
std::vector<Vector> orthogonal_complement(const std::vector<Vector>& basis, std::size_t dim,
                                          double tol = 1e-10);

// Numerical rank relative to the largest singular value.
std::size_t numerical_rank(const Matrix& a, double rel_tol = 1e-12);

}  // namespace steinitz
