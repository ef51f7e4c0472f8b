#pragma once
// Finitely generated subgroups regenerated by their small elements, seminorm
// distance bounds by lattice enumeration, and the interleaved (w, -w) series
// whose tail subset sums all reach 2a while a stays seminorm-far away.

#include <cstddef>
#include <string>
#include <vector>

#include "steinitz/hilbert.hpp"
#include "steinitz/series.hpp"

namespace steinitz {

// p(x) = sqrt(sum_i w_i x_i^2) with w_i >= 0; coordinates with w_i = 0 are
// p-null.
class DiagonalSeminorm {
 public:
  explicit DiagonalSeminorm(Vector weights);
  std::size_t dim() const { return weights_.size(); }
  const Vector& weights() const { return weights_; }
  double operator()(std::span<const double> x) const;
  // The seminorm c * p.
  DiagonalSeminorm scaled(double c) const;
  bool operator==(const DiagonalSeminorm&) const = default;

 private:
  Vector weights_;
};

struct FinGenGroup {
  std::vector<Vector> generators;
  std::vector<std::size_t> levels;  // generator j is certified to lie in (1/levels[j]) B
  std::size_t dim() const { return generators.empty() ? 0 : generators.front().size(); }
};

struct GenerationReport {
  std::vector<bool> generated;  // generated[m-1] for m = 1..m_max
  // For each m that succeeded: per generator, the small elements summing to it.
  std::vector<std::vector<std::vector<Vector>>> decompositions;
};

// For each m <= m_max, searches integer combinations with coefficients
// |c| <= search_depth for small elements (B-norm <= 1/m) and sums of at most
// search_depth of them for each generator. true is a proof, false means not
// found within the depth.
GenerationReport check_generation(const FinGenGroup& g, const WeightedHilbert& b,
                                  std::size_t m_max, std::size_t search_depth);

struct DistanceReport {
  double shell_min = 0.0;     // min p(a - y) over group elements y with p(y) <= p(a) + radius
  double lower_bound = 0.0;   // certified lower bound on d_p(a, G)
  bool closed = false;        // shell_min <= radius, so lower_bound = d_p(a, G)
  std::size_t enumerated = 0;
  std::size_t lattice_rank = 0;
};

inline constexpr std::size_t kDefaultEnumerationCap = 20000000;

// Throws EnumerationOverflow (carrying a certified partial bound) when the
// coefficient box exceeds `cap` points, InvalidArgument when the p-image of G
// is not discrete at the working precision.
DistanceReport distance_p(std::span<const double> a, const FinGenGroup& g,
                          const DiagonalSeminorm& p, double radius,
                          std::size_t cap = kDefaultEnumerationCap);

struct LadderInstance {
  FinGenGroup group;
  Vector a;
  WeightedHilbert b;
  DiagonalSeminorm p;
  std::size_t levels = 0;
  // representations[m-1]: elements of (1/m) B in the group summing to 2a.
  std::vector<std::vector<Vector>> representations;
  // level_bounds[n-1] = 2 - sum_{l<=n} 2^-l, the guaranteed d_p(a, G_n).
  Vector level_bounds;
  // Number of generators forming G_n, per level.
  std::vector<std::size_t> generators_at_level;
};

// a = e_1 with p(a) = 2; level n >= 2 adds 2a + (1/2n) e_n and -(1/2n) e_n in a
// fresh p-null coordinate. Throws InsufficientDimension when levels > d.
LadderInstance build_ladder(std::size_t d, std::size_t levels);

// The subgroup generated by the first `count` generators.
FinGenGroup prefix_group(const FinGenGroup& g, std::size_t count);

struct BadSeriesCertificate {
  SeriesSpec series;  // finite streams, one per coordinate
  Vector a;
  DiagonalSeminorm p{Vector{}};
  WeightedHilbert b{Vector{1.0}};
  std::vector<std::vector<Vector>> representations;
  std::vector<std::size_t> block_starts;              // 1-based first index of block m
  std::vector<std::vector<std::size_t>> tail_subsets;  // 1-based indices summing to 2a
  std::size_t length = 0;                             // number of terms
};

// Series (w_1^1, -w_1^1, ..., w_s(1)^1, -w_s(1)^1, w_1^2, -w_1^2, ...).
// Throws RepresentationInvalid when a representation does not sum to 2a
// exactly or has a term outside (1/m) B.
BadSeriesCertificate build_bad_series(std::span<const double> a,
                                      const std::vector<std::vector<Vector>>& representations,
                                      const WeightedHilbert& b, const DiagonalSeminorm& p);

// The subgroup generated by every representation term, tagged by block.
FinGenGroup certificate_group(const BadSeriesCertificate& cert);

struct NonconvexityVerdict {
  bool replay_ok = false;
  bool full_sum_zero = false;
  std::vector<bool> two_a_in_cloud;   // per m
  Vector cloud_distance;              // min p(a - z) over the Z_m cloud, per m
  std::vector<bool> cloud_truncated;  // per m
  double group_bound = 0.0;           // distance_p lower bound on the enclosing group
  bool group_bound_closed = false;
  bool nonconvex = false;             // 2a in every cloud while a stays p-separated
  std::string note;
};

// Throws CertificateReplayFailed when a recorded tail subset does not sum to
// 2a or the series does not sum to 0.
NonconvexityVerdict verify_nonconvexity(const BadSeriesCertificate& cert, std::size_t m_max,
                                        std::size_t horizon_per_block,
                                        std::size_t max_points = 1u << 20);

}  // namespace steinitz
