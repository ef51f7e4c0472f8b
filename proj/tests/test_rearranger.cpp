#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "instances.hpp"
#include "steinitz/domain.hpp"
#include "steinitz/errors.hpp"
#include "steinitz/rearranger.hpp"
#include "steinitz/zonotope.hpp"

using namespace steinitz;
using namespace testing_support;

namespace {

const double kZeta2 = std::numbers::pi * std::numbers::pi / 6.0;

SeriesSpec r2_anchor() {
  return {2, {{{1, 0}, ScalarStream::alternating_power(1.0)}, {{0, 1}, ScalarStream::power(2.0)}}};
}

SeriesSpec harmonic() { return {1, {{{1}, ScalarStream::alternating_power(1.0)}}}; }

// S_N over the emitted prefix, summed in emission order.
Vector prefix_sum(const SeriesSpec& s, const PermutationStream& st, std::size_t n) {
  Vector acc(s.dimension, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const Vector u = term(s, st.emitted[i]);
    for (std::size_t j = 0; j < acc.size(); ++j) acc[j] += u[j];
  }
  return acc;
}

}  // namespace

TEST_CASE("zonotope fit finds a basic point") {
  const std::vector<Vector> pts{{1, 0}, {0, 1}, {1, 1}, {2, -1}};
  const ZonotopeFit fit = zonotope_fit(pts, Vector{1.5, 0.5});
  CHECK(fit.residual_l1 <= 1e-12);
  CHECK(fractional_indices(fit.lambda).size() <= 2);
  Vector back(2, 0.0);
  for (std::size_t k = 0; k < pts.size(); ++k)
    for (std::size_t i = 0; i < 2; ++i) back[i] += fit.lambda[k] * pts[k][i];
  CHECK(back[0] == doctest::Approx(1.5));
  CHECK(back[1] == doctest::Approx(0.5));
  CHECK(zonotope_fit(pts, Vector{10, 10}).residual_l1 > 1.0);
}

TEST_CASE("round_off: two-point case") {
  const RoundOffInstance inst{{{1.0}, {-1.0}}, WeightedHilbert::standard(1), WeightedHilbert::standard(1), {0.5}};
  const RoundOffResult r = round_off(inst);
  CHECK(r.error <= 0.5 + 1e-15);
  CHECK(subset_error(inst, r.subset) == doctest::Approx(r.error));
}

TEST_CASE("round_off: seeded instances against the exhaustive oracle") {
  SeededRng rng(101);
  for (int t = 0; t < 100; ++t) {
    const RoundOffInstance inst = roundoff_instance(rng, 10, 4);
    const RoundOffResult r = round_off(inst);
    CHECK(subset_error(inst, r.subset) <= 1.0);
    CHECK(best_subset_error(inst) <= 1.0);
    CHECK(r.fractional <= inst.target.size());
  }
  // Four points in R^2, H2 weights 1/2 (HS = 1).
  for (int t = 0; t < 50; ++t) {
    std::vector<Vector> pts;
    for (int k = 0; k < 4; ++k) pts.push_back(ball_point(rng, {1.0, 1.0}));
    Vector y{0.0, 0.0};
    for (const Vector& p : pts) {
      const double l = rng.uniform();
      y[0] += l * p[0];
      y[1] += l * p[1];
    }
    const RoundOffInstance inst{pts, WeightedHilbert::standard(2), WeightedHilbert({0.5, 0.5}), y};
    CHECK(subset_error(inst, round_off(inst).subset) <= 1.0);
    CHECK(best_subset_error(inst) <= 1.0);
  }
}

TEST_CASE("round_off: precondition failures") {
  const RoundOffInstance outside{{{1.0}, {-1.0}}, WeightedHilbert::standard(1), WeightedHilbert::standard(1), {3.0}};
  try {
    round_off(outside);
    FAIL("expected PreconditionViolated");
  } catch (const PreconditionViolated& e) {
    CHECK(e.kind == Precondition::zonotope);
  }
  const RoundOffInstance hs{{{0.5, 0.0}}, WeightedHilbert::standard(2), WeightedHilbert::standard(2), {0.25, 0.0}};
  try {
    round_off(hs);
    FAIL("expected PreconditionViolated");
  } catch (const PreconditionViolated& e) {
    CHECK(e.kind == Precondition::hs);
  }
}

TEST_CASE("permute_bounded: small cases") {
  const PermInstance one{{{0.5}}, {0.25}, WeightedHilbert::standard(1), WeightedHilbert({1.0}),
                         WeightedHilbert({0.25})};
  CHECK(permute_bounded(one) == std::vector<std::size_t>{0});

  // 1-D alternating vectors
  const PermInstance alt{{{1.0}, {-1.0}, {1.0}, {-1.0}}, {0.0}, WeightedHilbert::standard(1),
                         WeightedHilbert({1.0}), WeightedHilbert({0.25})};
  const auto order = permute_bounded(alt);
  CHECK(is_permutation_of_range(order, 4));
  CHECK(prefix_max(alt, order) <= 1.0 + 1e-12);
  CHECK(some_order_bounded(alt));
}

TEST_CASE("permute_bounded: seeded instances against the exhaustive oracle") {
  SeededRng rng(202);
  for (int t = 0; t < 50; ++t) {
    const PermInstance inst = perm_instance(rng, 8, 3);
    const auto order = permute_bounded(inst);
    CHECK(is_permutation_of_range(order, inst.vectors.size()));
    CHECK(prefix_max(inst, order) <= 1.0 + 1e-12);
    CHECK(max_prefix_norm(inst, order) == doctest::Approx(prefix_max(inst, order)));
    CHECK(some_order_bounded(inst));
  }
}

TEST_CASE("permute_bounded: precondition failures") {
  const PermInstance bad_hs{{{0.5, 0.0}}, {0.0, 0.0}, WeightedHilbert::standard(2),
                            WeightedHilbert::standard(2), WeightedHilbert({0.5, 0.5})};
  CHECK_THROWS_AS(permute_bounded(bad_hs), PreconditionViolated);
  const PermInstance big{{{2.0}}, {0.0}, WeightedHilbert::standard(1), WeightedHilbert({1.0}),
                         WeightedHilbert({0.25})};
  CHECK_THROWS_AS(permute_bounded(big), PreconditionViolated);
}

TEST_CASE("riemann rearrangement") {
  const ScalarStream s = ScalarStream::alternating_power(1.0);
  const PermutationStream st = riemann_rearrange(s, 0.5, 10000);
  CHECK(st.emitted.size() == 10000);
  CHECK(std::set<std::size_t>(st.emitted.begin(), st.emitted.end()).size() == 10000);
  const SeriesSpec spec = harmonic();
  CHECK(std::abs(prefix_sum(spec, st, 10000)[0] - 0.5) <= 1e-3);
  CHECK(verify_stream(spec, Vector{0.5}, nullptr, st).ok);

  const PermutationStream ln2 = riemann_rearrange(s, std::numbers::ln2, 2000);
  CHECK(verify_stream(spec, Vector{std::numbers::ln2}, nullptr, ln2).ok);

  // sign symmetry
  const PermutationStream pos = riemann_rearrange(s, 0.0, 500);
  const PermutationStream neg = riemann_rearrange(ScalarStream::alternating_power(1.0, -1.0), 0.0, 500);
  const SeriesSpec nspec{1, {{{1}, ScalarStream::alternating_power(1.0, -1.0)}}};
  for (std::size_t n : {10u, 100u, 500u})
    CHECK(prefix_sum(spec, pos, n)[0] == doctest::Approx(-prefix_sum(nspec, neg, n)[0]));
  CHECK_THROWS_AS(riemann_rearrange(ScalarStream::power(2.0), 0.0, 10), NotConditional);
}

TEST_CASE("staged rearrangement of the alternating harmonic series to 0") {
  const SeriesSpec spec = harmonic();
  const DiscScale scale = build_hs_scale(KoetheMatrix::power(), 1, 3);
  const PermutationStream st = rearrange_to_target(spec, Vector{0.0}, scale, 5);
  REQUIRE(st.certificates.size() == 5);
  for (const StageCertificate& c : st.certificates) {
    const double err = std::abs(prefix_sum(spec, st, c.prefix_length)[0]) *
                       std::sqrt(scale.disc(c.disc).weights()[0]);
    CHECK(err <= 1.0 / static_cast<double>(c.stage) + 1e-12);
  }
  CHECK(verify_stream(spec, Vector{0.0}, &scale, st).ok);
}

TEST_CASE("staged rearrangement of the R^2 anchor") {
  const SeriesSpec spec = r2_anchor();
  const DiscScale scale = build_hs_scale(KoetheMatrix::power(), 2, 3);
  const Vector target{0.0, kZeta2};
  const PermutationStream st = rearrange_to_target(spec, target, scale, 5);
  const std::set<std::size_t> seen(st.emitted.begin(), st.emitted.end());
  CHECK(seen.size() == st.emitted.size());
  for (std::size_t k = 1; k <= 1000; ++k) CHECK(seen.count(k) == 1);
  for (const StageCertificate& c : st.certificates) {
    const Vector diff = subtract(prefix_sum(spec, st, c.prefix_length), target);
    const Vector& w = scale.disc(c.disc).weights();
    CHECK(std::sqrt(w[0] * diff[0] * diff[0] + w[1] * diff[1] * diff[1]) <=
          1.0 / static_cast<double>(c.stage) + 1e-12);
  }
  // Limit point passes membership.
  const Vector last = prefix_sum(spec, st, st.emitted.size());
  CHECK(membership(spec, last, 1e-2).in_domain);

  // Tampering with the stream is detected by replay.
  PermutationStream bad = st;
  std::swap(bad.emitted[0], bad.emitted[bad.certificates[0].prefix_length + 3]);
  bad.certificates[0].bound = 1e-9;
  CHECK_FALSE(verify_stream(spec, target, &scale, bad).ok);
}

TEST_CASE("staged rearrangement rejects targets off the domain") {
  const DiscScale scale = build_hs_scale(KoetheMatrix::power(), 2, 3);
  try {
    rearrange_to_target(r2_anchor(), Vector{0.0, 0.0}, scale, 2);
    FAIL("expected NotInDomain");
  } catch (const NotInDomain& e) {
    REQUIRE(e.separating_functional.size() == 2);
    CHECK(std::abs(std::abs(e.separating_functional[1]) - 1.0) <= 1e-8);
  }
  const PermutationStream none = rearrange_to_target(harmonic(), Vector{0.3},
                                                     build_hs_scale(KoetheMatrix::power(), 1, 3), 0);
  CHECK(none.emitted.empty());
}

TEST_CASE("stream text round trip") {
  const PermutationStream st = riemann_rearrange(ScalarStream::alternating_power(1.0), 0.25, 300);
  std::stringstream ss;
  write_stream(ss, st, {"header line"});
  const PermutationStream back = read_stream(ss);
  CHECK(back.emitted == st.emitted);
  CHECK(back.certificates == st.certificates);
  std::stringstream junk("1\n2\nbanana\n");
  CHECK_THROWS_AS(read_stream(junk), ParseError);
}
