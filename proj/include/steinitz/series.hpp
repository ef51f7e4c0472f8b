#pragma once
// Convergent series in R^d built from a closed set of scalar stream families,
// so that convergence type and tail bounds are decided by rule, not numerics.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "steinitz/linalg.hpp"

namespace steinitz {

enum class Family { power, alternating_power, geometric, finite };
enum class Convergence { absolute, conditional, divergent };

std::string to_string(Family f);
std::string to_string(Convergence c);

// Terms are indexed from k = 1.
//   power:             scale * k^-alpha
//   alternating_power: scale * (-1)^(k+1) * k^-alpha
//   geometric:         scale * ratio^k
//   finite:            values[k-1] for k <= values.size(), else 0
struct ScalarStream {
  Family family = Family::finite;
  double alpha = 0.0;
  double ratio = 0.0;
  double scale = 1.0;
  Vector values;

  static ScalarStream power(double alpha, double scale = 1.0);
  static ScalarStream alternating_power(double alpha, double scale = 1.0);
  static ScalarStream geometric(double ratio, double scale = 1.0);
  static ScalarStream finite(Vector values);

  double value(std::size_t k) const;
  // Throws InvalidArgument on a malformed parameter set.
  void validate() const;

  bool operator==(const ScalarStream&) const = default;
};

Convergence classify_stream(const ScalarStream& s);

// Grouping key for functional analysis: streams with equal signatures decay
// identically up to their scale.
struct Signature {
  Family family;
  double parameter;  // alpha, ratio, or 0 for finite streams
  auto operator<=>(const Signature&) const = default;
};
Signature signature(const ScalarStream& s);

struct Component {
  Vector direction;
  ScalarStream stream;
  bool operator==(const Component&) const = default;
};

struct SeriesSpec {
  std::size_t dimension = 0;
  std::vector<Component> components;

  // Shape checks plus convergence; throws InvalidArgument or DivergentSeries.
  void validate() const;
  bool operator==(const SeriesSpec&) const = default;
};

Vector term(const SeriesSpec& spec, std::size_t k);
Vector partial_sum(const SeriesSpec& spec, std::size_t n);

// sup_{k > n} |s(k)|.
double sup_abs_after(const ScalarStream& s, std::size_t n);
// Upper bound on sum_{k > n} |s(k)|; +inf for streams that are not absolutely
// summable.
double abs_tail_bound(const ScalarStream& s, std::size_t n);

struct CertifiedScalar {
  double value = 0.0;
  double error = 0.0;  // |value - true value| <= error
};

// sum_{k > n} s(k) with a certified error, for convergent streams.
CertifiedScalar stream_tail(const ScalarStream& s, std::size_t n);

inline constexpr std::size_t kDefaultSumCap = 100000000;

// Full sum of a convergent stream with error <= tol.
CertifiedScalar stream_sum(const ScalarStream& s, double tol, std::size_t cap = kDefaultSumCap);

struct CertifiedSum {
  Vector value;
  double error_bound = 0.0;  // Euclidean, <= tol
};

// Throws ToleranceUnreachable when a stream needs more than `cap` explicit terms.
CertifiedSum sum(const SeriesSpec& spec, double tol, std::size_t cap = kDefaultSumCap);

struct SubsetSumCloud {
  std::size_t m = 1;
  std::size_t horizon = 0;
  std::vector<Vector> points;  // sorted lexicographically
  bool truncated = false;
};

// Distinct subset sums of u_m..u_horizon (empty subset included), merged at
// 1e-12 resolution. Past `max_points` only the points reachable with the
// fewest terms are kept.
SubsetSumCloud enumerate_Zm(const SeriesSpec& spec, std::size_t m, std::size_t horizon,
                            std::size_t max_points);

// True when some cloud point lies within `tol` (Euclidean) of x.
bool cloud_contains(const SubsetSumCloud& cloud, std::span<const double> x, double tol = 1e-12);

}  // namespace steinitz
