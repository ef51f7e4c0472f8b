#pragma once
// Constructive rearrangement: coefficient rounding, prefix-bounded ordering,
// and the staged schedule that rearranges a series onto a target.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "steinitz/hilbert.hpp"
#include "steinitz/koethe.hpp"
#include "steinitz/series.hpp"

namespace steinitz {

struct RoundOffInstance {
  std::vector<Vector> points;
  WeightedHilbert h1;
  WeightedHilbert h2;
  Vector target;
};

struct RoundOffOptions {
  // Skip the hypothesis checks (the H2 bound may then be missed).
  bool force = false;
};

struct RoundOffResult {
  std::vector<std::size_t> subset;  // 0-based, increasing
  double error = 0.0;               // || sum_I y_k - y ||_{H2}
  std::size_t fractional = 0;       // fractional coordinates at the basic point
  bool exhaustive = false;          // answer came from full subset search
};

// Finds I with || sum_{k in I} y_k - y ||_{H2} <= 1.
RoundOffResult round_off(const RoundOffInstance& inst, RoundOffOptions options = {});

struct PermInstance {
  std::vector<Vector> vectors;
  Vector anchor;
  WeightedHilbert h1;
  WeightedHilbert h2;
  WeightedHilbert h3;
};

struct PermOptions {
  bool force = false;
  // Node budget for the depth-first search; ignored (unlimited) when s <= 10.
  std::size_t node_budget = 2000000;
};

// Order sigma (0-based) with every prefix anchor + sum_{k<=m} v_sigma(k) in the
// unit ball of H3.
std::vector<std::size_t> permute_bounded(const PermInstance& inst, PermOptions options = {});

// Largest H3 norm over the prefixes of an order.
double max_prefix_norm(const PermInstance& inst, std::span<const std::size_t> order);

struct StageCertificate {
  std::size_t stage = 0;
  std::size_t prefix_length = 0;  // N
  double bound = 0.0;             // || S_N - target ||_disc <= bound
  std::size_t disc = 0;           // 0: Euclidean norm, n >= 1: disc n of the scale

  bool operator==(const StageCertificate&) const = default;
};

struct PermutationStream {
  std::vector<std::size_t> emitted;  // 1-based term indices
  std::vector<StageCertificate> certificates;
};

struct RearrangeOptions {
  std::size_t stage_width = 64;
  std::uint64_t seed = 0;
  std::size_t window_cap = std::size_t{1} << 22;
};

// Stage l emits every index up to this deadline (and possibly more).
std::size_t stage_deadline(std::size_t stage, std::size_t stage_width);

// Sequential generator; not safe to drive from two threads at once.
class TargetRearranger {
 public:
  TargetRearranger(SeriesSpec spec, Vector target, DiscScale scale, RearrangeOptions options = {});

  // Runs the next stage; throws StageFailure when a sub-solver misses its bound.
  void next_stage();
  std::size_t stages_done() const { return stage_ - 2; }
  const PermutationStream& stream() const { return stream_; }

 private:
  SeriesSpec spec_;
  Vector target_;
  DiscScale scale_;
  RearrangeOptions options_;
  PermutationStream stream_;
  std::vector<char> emitted_;  // emitted_[k] for 1-based k
  Vector prefix_;
  std::size_t stage_ = 2;
  std::size_t frontier_ = 0;  // all indices <= frontier_ are emitted
};

PermutationStream rearrange_to_target(const SeriesSpec& spec, std::span<const double> target,
                                      const DiscScale& scale, std::size_t stages,
                                      RearrangeOptions options = {});

// Greedy Riemann rearrangement of a conditionally convergent stream; one
// certificate (Euclidean, disc 0) at every crossing of the target.
PermutationStream riemann_rearrange(const ScalarStream& stream, double target, std::size_t count);

// Norm used by a certificate.
double certificate_norm(std::span<const double> v, std::size_t disc, const DiscScale* scale);

struct StreamCheck {
  bool ok = true;
  std::string failure;
  Vector worst_errors;  // achieved error per certificate
};

// Replays a stream: distinct indices, and every certificate bound recomputed
// from the emitted prefix.
StreamCheck verify_stream(const SeriesSpec& spec, std::span<const double> target,
                          const DiscScale* scale, const PermutationStream& stream);

// Line format: header comments, one index per line, "# stage l N bound disc".
void write_stream(std::ostream& out, const PermutationStream& stream,
                  const std::vector<std::string>& header);
PermutationStream read_stream(std::istream& in);

}  // namespace steinitz
