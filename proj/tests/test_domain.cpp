#include <doctest.h>

#include <cmath>
#include <numbers>

#include "steinitz/domain.hpp"
#include "steinitz/errors.hpp"
#include "steinitz/kernels.hpp"
#include "steinitz/rng.hpp"

using namespace steinitz;
using kernels::dot;

namespace {

const double kZeta2 = std::numbers::pi * std::numbers::pi / 6.0;

SeriesSpec r2_anchor() {
  return {2, {{{1, 0}, ScalarStream::alternating_power(1.0)}, {{0, 1}, ScalarStream::power(2.0)}}};
}

SeriesSpec random_spec(SeededRng& rng) {
  SeriesSpec s;
  s.dimension = 1 + rng.below(4);
  const std::size_t comps = 1 + rng.below(4);
  const double alphas[] = {0.5, 0.75, 1.0, 1.5, 2.0};
  for (std::size_t c = 0; c < comps; ++c) {
    Vector d(s.dimension);
    for (double& x : d) x = std::round(rng.uniform(-2, 2));
    if (norm2(d) == 0.0) d[0] = 1.0;
    const double a = alphas[rng.below(5)];
    s.components.push_back({d, rng.below(2) ? ScalarStream::alternating_power(a, rng.uniform(0.5, 2))
                                            : ScalarStream::geometric(rng.uniform(-0.8, 0.8))});
  }
  return s;
}

}  // namespace

TEST_CASE("gamma of the R^2 anchor") {
  const GammaReport g = gamma(r2_anchor());
  CHECK(g.gamma_perp_basis == std::vector<Vector>{{1.0, 0.0}});
  CHECK(g.gamma_basis == std::vector<Vector>{{0.0, 1.0}});
}

TEST_CASE("absolute series have trivial annihilator") {
  const SeriesSpec s{3, {{{1, 2, 3}, ScalarStream::power(2.0)}, {{0, 1, 0}, ScalarStream::geometric(0.3)}}};
  const GammaReport g = gamma(s);
  CHECK(g.gamma_perp_basis.empty());
  CHECK(g.gamma_basis.size() == 3);
  const AffineSubspace a = domain_of_sums(s, 1e-9);
  CHECK(a.directions.empty());
}

TEST_CASE("components sharing a signature combine before the rank decision") {
  const SeriesSpec s{2,
                     {{{1, 0}, ScalarStream::alternating_power(1.0, 1.0)},
                      {{0, 1}, ScalarStream::alternating_power(1.0, -1.0)}}};
  const GammaReport g = gamma(s);
  REQUIRE(g.gamma_perp_basis.size() == 1);
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(std::abs(g.gamma_perp_basis[0][0]) - r) <= 1e-15);
  CHECK(g.gamma_perp_basis[0][0] == doctest::Approx(-g.gamma_perp_basis[0][1]));

  // Exactly cancelling class: the series is absolutely convergent.
  const SeriesSpec c{1,
                     {{{1}, ScalarStream::alternating_power(1.0, 1.0)},
                      {{1}, ScalarStream::alternating_power(1.0, -1.0)}}};
  CHECK(gamma(c).gamma_perp_basis.empty());
}

TEST_CASE("domain of sums and membership for the anchor") {
  const SeriesSpec s = r2_anchor();
  const AffineSubspace a = domain_of_sums(s, 1e-9);
  CHECK(std::abs(a.offset[0] - std::numbers::ln2) <= 1e-8);
  CHECK(std::abs(a.offset[1] - kZeta2) <= 1e-8);
  CHECK(membership(s, a.offset, 1e-8).in_domain);
  CHECK(membership(s, Vector{5.0, kZeta2}, 1e-8).in_domain);
  const Membership out = membership(s, Vector{0.0, 0.0}, 1e-8);
  CHECK_FALSE(out.in_domain);
  REQUIRE(out.separating_functional.size() == 2);
  CHECK(std::abs(out.separating_functional[0]) <= 1e-12);
  CHECK(std::abs(std::abs(out.separating_functional[1]) - 1.0) <= 1e-12);
}

TEST_CASE("structural invariants on random specs") {
  SeededRng rng(77);
  for (int t = 0; t < 200; ++t) {
    const SeriesSpec s = random_spec(rng);
    const GammaReport g = gamma(s);
    CHECK(g.gamma_basis.size() + g.gamma_perp_basis.size() == s.dimension);
    for (const Vector& x : g.gamma_basis)
      for (const Vector& y : g.gamma_perp_basis) CHECK(std::abs(dot(x, y)) < 1e-10);
    // Direction count is the rank of the conditional combination vectors.
    std::size_t r = g.conditional_vectors.empty() ? 0
                                                 : numerical_rank(Matrix::from_rows(g.conditional_vectors), 1e-10);
    CHECK(g.gamma_perp_basis.size() == r);
    const AffineSubspace a = domain_of_sums(s, 1e-9);
    CHECK(membership(s, a.offset, 1e-8).in_domain);

    // weak check agrees with membership
    Vector x(s.dimension);
    for (double& v : x) v = rng.uniform(-3, 3);
    if (rng.below(2)) x = a.offset;
    CHECK(weak_domain_check(s, x, 1e-8) == membership(s, x, 1e-8).in_domain);
  }
}

TEST_CASE("functionals in gamma have bounded absolute images, those in the annihilator do not") {
  const SeriesSpec s{2,
                     {{{1, 1}, ScalarStream::alternating_power(0.25)},
                      {{0, 1}, ScalarStream::power(2.0)},
                      {{1, -1}, ScalarStream::geometric(-0.5)}}};
  const GammaReport g = gamma(s);
  REQUIRE(g.gamma_basis.size() == 1);
  REQUIRE(g.gamma_perp_basis.size() == 1);
  const auto abs_sum = [&](const Vector& f, std::size_t n) {
    double acc = 0.0;
    for (std::size_t k = 1; k <= n; ++k) acc += std::abs(dot(f, term(s, k)));
    return acc;
  };
  // Certified bound: sum over components of |<f, d_i>| * sum_k |s_i(k)|.
  const Vector& f = g.gamma_basis[0];
  double bound = 0.0;
  for (const Component& c : s.components)
    if (classify_stream(c.stream) == Convergence::absolute)
      bound += std::abs(dot(f, c.direction)) * (std::abs(c.stream.value(1)) + abs_tail_bound(c.stream, 1));
  CHECK(abs_sum(f, 100000) <= bound * (1.0 + 1e-12));
  CHECK(abs_sum(g.gamma_perp_basis[0], 100000) > 10.0 * abs_sum(g.gamma_perp_basis[0], 1000));
}

TEST_CASE("dense domain series") {
  const SeriesSpec one = dense_domain_series(1);
  CHECK(one.components.size() == 1);
  CHECK(one.components[0].stream == ScalarStream::alternating_power(1.0));
  const GammaReport g2 = gamma(dense_domain_series(2));
  CHECK(g2.gamma_basis.empty());
  CHECK(g2.gamma_perp_basis.size() == 2);
  const AffineSubspace a = domain_of_sums(dense_domain_series(3), 1e-8);
  CHECK(a.directions.size() == 3);
  for (double v : a.offset) CHECK(std::isfinite(v));
}

TEST_CASE("gamma_local collapses to gamma") {
  SeededRng rng(5);
  for (int t = 0; t < 30; ++t) {
    const SeriesSpec s = random_spec(rng);
    const DiscScale scale = build_hs_scale(KoetheMatrix::power(), s.dimension, 3);
    const auto reports = gamma_local(s, scale);
    REQUIRE(reports.size() == 3);
    for (const GammaReport& r : reports) CHECK(r.gamma_perp_basis == gamma(s).gamma_perp_basis);
  }
  const DiscScale wrong = build_hs_scale(KoetheMatrix::power(), 5, 3);
  CHECK_THROWS_AS(gamma_local(r2_anchor(), wrong), DimensionMismatch);
}
