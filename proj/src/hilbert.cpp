#include "steinitz/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "steinitz/errors.hpp"
#include "steinitz/kernels.hpp"
#include "steinitz/rng.hpp"

namespace steinitz {

WeightedHilbert::WeightedHilbert(Vector weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw InvalidArgument("WeightedHilbert: dimension must be >= 1");
  for (double w : weights_)
    if (!(w > 0.0) || !std::isfinite(w))
      throw InvalidArgument("WeightedHilbert: weights must be finite and > 0");
}

WeightedHilbert WeightedHilbert::standard(std::size_t dim) {
  return WeightedHilbert(Vector(dim, 1.0));
}

double WeightedHilbert::inner(std::span<const double> x, std::span<const double> y) const {
  if (x.size() != dim() || y.size() != dim()) throw DimensionMismatch("inner: dimension");
  double s = 0.0;
  for (std::size_t i = 0; i < dim(); ++i) s += weights_[i] * x[i] * y[i];
  return s;
}

double WeightedHilbert::norm(std::span<const double> x) const {
  if (x.size() != dim()) throw DimensionMismatch("norm: dimension");
  return std::sqrt(kernels::weighted_sq_norm(weights_, x));
}

double WeightedHilbert::distance(std::span<const double> x, std::span<const double> y) const {
  if (x.size() != dim() || y.size() != dim()) throw DimensionMismatch("distance: dimension");
  return std::sqrt(kernels::weighted_sq_dist(weights_, x, y));
}

WeightedHilbert WeightedHilbert::rescaled(double factor) const {
  Vector w = weights_;
  for (double& x : w) x *= factor * factor;
  return WeightedHilbert(std::move(w));
}

LinearMap::LinearMap(Matrix matrix, WeightedHilbert domain, WeightedHilbert codomain)
    : matrix_(std::move(matrix)), domain_(std::move(domain)), codomain_(std::move(codomain)) {
  if (matrix_.rows() != codomain_.dim() || matrix_.cols() != domain_.dim())
    throw DimensionMismatch("LinearMap: matrix shape does not match spaces");
}

LinearMap::LinearMap(Matrix matrix)
    : LinearMap(matrix, WeightedHilbert::standard(matrix.cols()),
                WeightedHilbert::standard(matrix.rows())) {}

LinearMap LinearMap::identity(const WeightedHilbert& from, const WeightedHilbert& to) {
  if (from.dim() != to.dim()) throw DimensionMismatch("identity: dimensions differ");
  return LinearMap(Matrix::identity(from.dim()), from, to);
}

Matrix LinearMap::normalized() const {
  Matrix n = matrix_;
  for (std::size_t r = 0; r < n.rows(); ++r) {
    const double left = std::sqrt(codomain_.weights()[r]);
    for (std::size_t c = 0; c < n.cols(); ++c) n(r, c) *= left / std::sqrt(domain_.weights()[c]);
  }
  return n;
}

LinearMap compose(const LinearMap& outer, const LinearMap& inner) {
  if (!(outer.domain() == inner.codomain()))
    throw DimensionMismatch("compose: inner codomain differs from outer domain");
  return LinearMap(outer.matrix() * inner.matrix(), inner.domain(), outer.codomain());
}

Vector singular_values(const LinearMap& map) { return jacobi_singular_values(map.normalized()); }

double hs_norm(const LinearMap& map) {
  const Matrix n = map.normalized();
  return std::sqrt(kernels::dot(n.data(), n.data()));
}

double operator_norm(const LinearMap& map) {
  const Vector sv = singular_values(map);
  return sv.empty() ? 0.0 : sv.front();
}

namespace {

std::size_t rank_of(std::span<const double> sv) {
  if (sv.empty() || sv.front() == 0.0) return 0;
  std::size_t r = 0;
  for (double s : sv)
    if (s > kRankTolerance * sv.front()) ++r;
  return r;
}

}  // namespace

std::size_t rank(const LinearMap& map) { return rank_of(singular_values(map)); }

double volume_number_from_singular_values(std::span<const double> sv, std::size_t n) {
  if (n == 0) throw InvalidArgument("volume_number: n must be >= 1");
  if (n > rank_of(sv)) return 0.0;
  double prod = 1.0;
  for (std::size_t i = 0; i < n; ++i) prod *= sv[i];
  if (std::isnormal(prod)) return std::pow(prod, 1.0 / static_cast<double>(n));
  double log_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) log_sum += std::log(sv[i]);
  return std::exp(log_sum / static_cast<double>(n));
}

double volume_number(const LinearMap& map, std::size_t n) {
  return volume_number_from_singular_values(singular_values(map), n);
}

namespace {

// Orthonormalizes columns in place (modified Gram-Schmidt, two passes).
// Returns false if a column collapses.
bool orthonormalize(std::vector<Vector>& cols) {
  for (std::size_t j = 0; j < cols.size(); ++j) {
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t i = 0; i < j; ++i) kernels::axpy(-kernels::dot(cols[j], cols[i]), cols[i], cols[j]);
    const double nj = norm2(cols[j]);
    if (nj < 1e-10) return false;
    for (double& x : cols[j]) x /= nj;
  }
  return true;
}

// log det(Q^T G Q) for the first n columns of `frame`.
double log_gram_det(const Matrix& gram, const std::vector<Vector>& frame, std::size_t n) {
  std::vector<Vector> gq(n);
  for (std::size_t i = 0; i < n; ++i) gq[i] = gram * std::span<const double>(frame[i]);
  Matrix small(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) small(i, j) = kernels::dot(frame[i], gq[j]);
  const double det = determinant(small);
  return det > 0.0 ? std::log(det) : -std::numeric_limits<double>::infinity();
}

}  // namespace

double volume_number_bruteforce(const LinearMap& map, std::size_t n, std::size_t trials,
                                std::uint64_t seed) {
  const std::size_t dim = map.domain().dim();
  if (n == 0 || n > dim) throw InvalidArgument("volume_number_bruteforce: need 1 <= n <= dim");
  if (trials == 0) throw InvalidArgument("volume_number_bruteforce: trials must be >= 1");
  const Matrix normalized = map.normalized();
  if (rank_of(jacobi_singular_values(normalized)) < n) return 0.0;
  const Matrix gram = normalized.transpose() * normalized;

  SeededRng rng(seed);
  std::vector<Vector> best;
  double best_value = -std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < trials; ++t) {
    std::vector<Vector> frame(dim);
    for (Vector& c : frame) c = rng.gaussian_vector(dim);
    if (!orthonormalize(frame)) continue;
    const double value = log_gram_det(gram, frame, n);
    if (value > best_value) {
      best_value = value;
      best = std::move(frame);
    }
    if (n == dim) break;  // a single subspace
  }
  if (best.empty()) return 0.0;

  // Coordinate descent: rotate a frame vector towards a complement vector.
  double step = 0.5;
  std::size_t evaluations = 0;
  constexpr std::size_t max_evaluations = 200000;
  while (n < dim && step > 1e-10 && evaluations < max_evaluations) {
    bool improved = false;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = n; j < dim; ++j) {
        for (double sign : {1.0, -1.0}) {
          Vector qi = best[i];
          Vector qj = best[j];
          kernels::rotate(qi, qj, std::cos(sign * step), std::sin(sign * step));
          std::swap(best[i], qi);
          std::swap(best[j], qj);
          const double value = log_gram_det(gram, best, n);
          ++evaluations;
          if (value > best_value) {
            best_value = value;
            improved = true;
          } else {
            std::swap(best[i], qi);
            std::swap(best[j], qj);
          }
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  // |det| of the restriction is sqrt(det Gram).
  return std::exp(best_value / (2.0 * static_cast<double>(n)));
}

SNumberReport s_number_report(const LinearMap& map) {
  SNumberReport report;
  report.singular_values = singular_values(map);
  report.rank = rank_of(report.singular_values);
  for (std::size_t n = 1; n <= report.rank; ++n)
    report.volume_numbers.push_back(
        volume_number_from_singular_values(report.singular_values, n));
  report.hs_norm = hs_norm(map);
  return report;
}

}  // namespace steinitz
