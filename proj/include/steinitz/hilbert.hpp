#pragma once
// Diagonal-weighted Hilbert spaces over R^d and linear maps between them:
// singular values, Hilbert-Schmidt norms and volume numbers.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "steinitz/linalg.hpp"

namespace steinitz {

// R^dim with <x, y> = sum_i w_i x_i y_i, all w_i > 0.
class WeightedHilbert {
 public:
  explicit WeightedHilbert(Vector weights);
  static WeightedHilbert standard(std::size_t dim);

  std::size_t dim() const { return weights_.size(); }
  const Vector& weights() const { return weights_; }

  double inner(std::span<const double> x, std::span<const double> y) const;
  double norm(std::span<const double> x) const;
  double distance(std::span<const double> x, std::span<const double> y) const;
  // The same space with norm multiplied by `factor` (weights times factor^2).
  WeightedHilbert rescaled(double factor) const;

  bool operator==(const WeightedHilbert&) const = default;

 private:
  Vector weights_;
};

class LinearMap {
 public:
  LinearMap(Matrix matrix, WeightedHilbert domain, WeightedHilbert codomain);
  // Matrix between standard Euclidean spaces.
  explicit LinearMap(Matrix matrix);
  static LinearMap identity(const WeightedHilbert& from, const WeightedHilbert& to);

  const Matrix& matrix() const { return matrix_; }
  const WeightedHilbert& domain() const { return domain_; }
  const WeightedHilbert& codomain() const { return codomain_; }

  // W_cod^{1/2} M W_dom^{-1/2}: the map in orthonormal coordinates.
  Matrix normalized() const;

 private:
  Matrix matrix_;
  WeightedHilbert domain_;
  WeightedHilbert codomain_;
};

// Composition `outer` after `inner`; inner's codomain must equal outer's domain.
LinearMap compose(const LinearMap& outer, const LinearMap& inner);

struct SNumberReport {
  Vector singular_values;  // nonincreasing
  Vector volume_numbers;   // v_1 .. v_rank
  double hs_norm = 0.0;
  std::size_t rank = 0;
};

// Singular values at or below this fraction of the largest count as zero.
inline constexpr double kRankTolerance = 1e-12;

double hs_norm(const LinearMap& map);
Vector singular_values(const LinearMap& map);
double operator_norm(const LinearMap& map);
std::size_t rank(const LinearMap& map);

// Geometric mean of the first n singular values; 0 once n exceeds the rank.
double volume_number(const LinearMap& map, std::size_t n);
double volume_number_from_singular_values(std::span<const double> sv, std::size_t n);

// Lower estimate of v_n from the defining supremum over n-dimensional domain
// subspaces: seeded random orthonormal frames, then coordinate descent over
// plane rotations of the best frame. Returns 0 when rank(map) < n.
double volume_number_bruteforce(const LinearMap& map, std::size_t n, std::size_t trials,
                                std::uint64_t seed);

SNumberReport s_number_report(const LinearMap& map);

}  // namespace steinitz
