// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failures.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <set>
#include <string>

#include "instances.hpp"
#include "steinitz/counterexample.hpp"
#include "steinitz/domain.hpp"
#include "steinitz/errors.hpp"
#include "steinitz/hilbert.hpp"
#include "steinitz/koethe.hpp"
#include "steinitz/nuclearity.hpp"
#include "steinitz/rearranger.hpp"

using namespace steinitz;
using namespace testing_support;

namespace {

const double kZeta2 = std::numbers::pi * std::numbers::pi / 6.0;

SeriesSpec r2_anchor() {
  return {2, {{{1, 0}, ScalarStream::alternating_power(1.0)}, {{0, 1}, ScalarStream::power(2.0)}}};
}

Vector emitted_sum(const SeriesSpec& s, const std::vector<std::size_t>& order, std::size_t n) {
  Vector acc(s.dimension, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const Vector u = term(s, order[i]);
    for (std::size_t j = 0; j < acc.size(); ++j) acc[j] += u[j];
  }
  return acc;
}

Matrix uniform_matrix(SeededRng& rng, std::size_t r, std::size_t c) {
  Matrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = rng.uniform(-1.0, 1.0);
  return m;
}

WeightedHilbert weighted_space(SeededRng& rng, std::size_t d) {
  Vector w(d);
  for (double& x : w) x = rng.uniform(0.25, 4.0);
  return WeightedHilbert(w);
}

// v_n with the convention v_n = 0 once n exceeds either dimension.
double vol(const LinearMap& t, std::size_t n) {
  if (n > t.matrix().rows() || n > t.matrix().cols()) return 0.0;
  return volume_number(t, n);
}

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

int failures = 0;

void criterion(int id, const char* name, double budget_s, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.require(false, std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.require(secs < budget_s, "over time budget");
  if (!o.pass) ++failures;
  std::printf("%s %2d %-34s %8.3f s / %5.0f s%s%s\n", o.pass ? "PASS" : "FAIL", id, name, secs, budget_s,
              o.detail.empty() ? "" : "  ", o.detail.c_str());
  std::fflush(stdout);
}

}  // namespace

int main() {
  criterion(1, "levy-steinitz anchor", 1, [](Outcome& o) {
    const SeriesSpec s = r2_anchor();
    const AffineSubspace d = domain_of_sums(s, 1e-9);
    o.require(std::abs(d.offset[0] - std::numbers::ln2) <= 1e-6, "offset x");
    o.require(std::abs(d.offset[1] - kZeta2) <= 1e-6, "offset y");
    o.require(d.directions == std::vector<Vector>{{1.0, 0.0}}, "directions");
    const Membership m = membership(s, Vector{0.0, 0.0}, 1e-9);
    o.require(!m.in_domain, "origin accepted");
    o.require(m.separating_functional.size() == 2 && std::abs(m.separating_functional[0]) <= 1e-8 &&
                  std::abs(std::abs(m.separating_functional[1]) - 1.0) <= 1e-8,
              "functional");
  });

  criterion(2, "riemann rearrangement to 0.5", 1, [](Outcome& o) {
    const SeriesSpec s{1, {{{1}, ScalarStream::alternating_power(1.0)}}};
    const PermutationStream st = riemann_rearrange(s.components[0].stream, 0.5, 10000);
    o.require(st.emitted.size() == 10000, "length");
    o.require(std::set<std::size_t>(st.emitted.begin(), st.emitted.end()).size() == 10000, "repeated index");
    o.require(std::abs(emitted_sum(s, st.emitted, 10000)[0] - 0.5) <= 1e-3, "S_N error");
    o.require(verify_stream(s, Vector{0.5}, nullptr, st).ok, "replay");
  });

  criterion(3, "rounding off coefficients x500", 30, [](Outcome& o) {
    SeededRng rng(3003);
    for (int t = 0; t < 500; ++t) {
      const RoundOffInstance inst = roundoff_instance(rng, 12, 4);
      const RoundOffResult r = round_off(inst);
      o.require(subset_error(inst, r.subset) <= 1.0, "round_off error > 1 at " + std::to_string(t));
      o.require(best_subset_error(inst) <= 1.0, "oracle infeasible at " + std::to_string(t));
    }
  });

  criterion(4, "bounded permutation x500", 60, [](Outcome& o) {
    SeededRng rng(4004);
    for (int t = 0; t < 500; ++t) {
      const PermInstance inst = perm_instance(rng, 9, 3);
      const std::vector<std::size_t> order = permute_bounded(inst);
      o.require(is_permutation_of_range(order, inst.vectors.size()), "not a permutation at " + std::to_string(t));
      o.require(prefix_max(inst, order) <= 1.0 + 1e-12, "prefix outside B_H3 at " + std::to_string(t));
      if (t < 50) o.require(some_order_bounded(inst), "oracle disagrees at " + std::to_string(t));
    }
  });

  criterion(5, "staged rearrangement in R^2", 60, [](Outcome& o) {
    const SeriesSpec s = r2_anchor();
    const Vector target{0.0, kZeta2};
    const DiscScale scale = build_hs_scale(KoetheMatrix::power(), 2, 3);
    const PermutationStream st = rearrange_to_target(s, target, scale, 5);
    std::vector<std::size_t> stages;
    for (const StageCertificate& c : st.certificates) {
      stages.push_back(c.stage);
      const Vector sn = emitted_sum(s, st.emitted, c.prefix_length);
      const Vector& w = scale.disc(c.disc).weights();
      double sq = 0.0;
      for (std::size_t i = 0; i < 2; ++i) sq += w[i] * (sn[i] - target[i]) * (sn[i] - target[i]);
      o.require(c.disc >= 1 && std::sqrt(sq) <= 1.0 / static_cast<double>(c.stage),
                "checkpoint of stage " + std::to_string(c.stage));
    }
    o.require(stages == std::vector<std::size_t>{2, 3, 4, 5, 6}, "stage list");
    const std::set<std::size_t> seen(st.emitted.begin(), st.emitted.end());
    o.require(seen.size() == st.emitted.size(), "repeated index");
    for (std::size_t k = 1; k <= 1000; ++k) o.require(seen.count(k) == 1, "index " + std::to_string(k) + " missing");
  });

  criterion(6, "volume numbers", 120, [](Outcome& o) {
    SeededRng rng(6006);
    for (int t = 0; t < 100; ++t) {
      const std::size_t r = 1 + rng.below(4), c = 1 + rng.below(4);
      const LinearMap t_map(uniform_matrix(rng, r, c), weighted_space(rng, c), weighted_space(rng, r));
      for (std::size_t n = 1; n <= std::min(r, c); ++n) {
        const double bf = volume_number_bruteforce(t_map, n, 5000, 100 * t + n);
        o.require(std::abs(bf - volume_number(t_map, n)) <= 1e-5, "brute force at map " + std::to_string(t));
      }
    }
    for (int t = 0; t < 1000; ++t) {
      const std::size_t a = 1 + rng.below(4), b = 1 + rng.below(4), c = 1 + rng.below(4), e = 1 + rng.below(4);
      const WeightedHilbert x = weighted_space(rng, a), y = weighted_space(rng, b), z = weighted_space(rng, c),
                            u = weighted_space(rng, e);
      const LinearMap s(uniform_matrix(rng, b, a), x, y);
      const LinearMap tm(uniform_matrix(rng, c, b), y, z);
      const LinearMap rm(uniform_matrix(rng, e, c), z, u);
      const LinearMap ts = compose(tm, s);
      const LinearMap rts = compose(rm, ts);
      const Vector hilbert_numbers = singular_values(ts);
      for (std::size_t n = 1; n <= 4; ++n) {
        const double v = vol(ts, n);
        o.require(vol(tm, n) <= operator_norm(tm) + 1e-9, "(1)");
        o.require(v <= vol(tm, n) * vol(s, n) + 1e-9, "(2)");
        o.require(vol(rts, n) <= operator_norm(rm) * vol(tm, n) * operator_norm(s) + 1e-9, "(3)");
        if (n <= hilbert_numbers.size()) o.require(v >= hilbert_numbers[n - 1] - 1e-9, "(5)");
      }
      for (std::size_t n = rank(ts) + 1; n <= std::min(a, c); ++n) o.require(volume_number(ts, n) == 0.0, "rank");
    }
    const LinearMap rank_two(Matrix{{1, 0, 0, 0}, {0, 3, 0, 0}, {0, 0, 0, 0}, {2, 0, 0, 0}});
    o.require(volume_number(rank_two, 3) == 0.0 && volume_number(rank_two, 4) == 0.0, "beyond rank");
  });

  criterion(7, "koethe nuclearity", 1, [](Outcome& o) {
    const NuclearityVerdict p = nuclearity_test(KoetheMatrix::power(), 6, 12, 1e-9);
    o.require(p.nuclear, "power not nuclear");
    for (std::size_t n = 1; n <= 6; ++n) {
      o.require(p.witness.size() >= n && p.witness[n - 1] == n + 2, "witness " + std::to_string(n));
      const NuclearityVerdict tight = nuclearity_test(KoetheMatrix::power(), n, n + 1, 1e-9);
      o.require(!tight.nuclear && tight.failing_n == n, "m = n+1 accepted at " + std::to_string(n));
    }
    const NuclearityVerdict c = nuclearity_test(KoetheMatrix::constant_grid(1.0), 6, 12, 1e-9);
    o.require(!c.nuclear && c.n_max == 6 && c.m_max == 12, "constant grid");
  });

  criterion(8, "hilbert-schmidt disc scale", 1, [](Outcome& o) {
    const DiscScale s = build_hs_scale(KoetheMatrix::power(), 3, 4);
    for (std::size_t n = 1; n < 4; ++n) o.require(hs_link(s, n) <= 0.5 + 1e-12, "link " + std::to_string(n));
    o.require(std::abs(s.raw_links[0] - std::sqrt(1.0 + 0.25 + 1.0 / 9.0)) <= 1e-9, "raw first link");
  });

  criterion(9, "composition chain inequalities", 60, [](Outcome& o) {
    SeededRng rng(9009);
    for (int t = 0; t < 100; ++t) {
      std::vector<std::size_t> dims(6);
      for (auto& d : dims) d = 1 + rng.below(6);
      std::vector<LinearMap> maps;
      // maps[0] is applied last
      for (std::size_t i = 0; i < 5; ++i) maps.push_back(LinearMap(uniform_matrix(rng, dims[i], dims[i + 1])));
      const LinearMap total = compose_chain(maps);
      const std::size_t top = *std::max_element(dims.begin(), dims.end());
      double lhs = 0.0, rhs = 1.0;
      for (std::size_t l = 1; l <= top; ++l) lhs = std::max(lhs, std::pow(double(l), 5.0) * vol(total, l));
      for (const LinearMap& m : maps) {
        double sup = 0.0;
        for (std::size_t l = 1; l <= top; ++l) sup = std::max(sup, double(l) * vol(m, l));
        rhs *= sup;
      }
      o.require(lhs <= rhs + 1e-9 * std::max(1.0, rhs), "sup inequality at chain " + std::to_string(t));
      const Vector delta = singular_values(total);
      double log_prod = 0.0;
      for (std::size_t n = 1; n <= delta.size(); ++n) {
        const double v = vol(total, n);
        if (v == 0.0) {
          o.require(delta[n - 1] <= 1e-9, "delta beyond rank");
          continue;
        }
        log_prod += std::log(double(n) * v) - std::log(double(n));
        // (prod_{l<=n} n v_l)^{1/n} = n (prod v_l)^{1/n}
        const double bound = double(n) * std::exp(log_prod / double(n));
        o.require(delta[n - 1] <= bound + 1e-9 * std::max(1.0, bound), "chain inequality at " + std::to_string(t));
      }
      const ChainCheck c = composition_chain_check(maps, 1.0);
      o.require(c.sup_inequality && c.chain_inequality, "library check disagrees at " + std::to_string(t));
    }
  });

  criterion(10, "counterexample ladder", 120, [](Outcome& o) {
    const LadderInstance inst = build_ladder(4, 3);
    const GenerationReport gen = check_generation(inst.group, inst.b, 3, 2);
    o.require(gen.generated == std::vector<bool>{true, true, true}, "generation");
    const DistanceReport dist = distance_p(inst.a, inst.group, inst.p, inst.p(inst.a));
    o.require(dist.lower_bound >= 1.125, "distance_p");
    const BadSeriesCertificate cert = build_bad_series(inst.a, inst.representations, inst.b, inst.p);
    const Vector full = partial_sum(cert.series, cert.length);
    o.require(std::all_of(full.begin(), full.end(), [](double x) { return x == 0.0; }), "full sum");
    const NonconvexityVerdict v = verify_nonconvexity(cert, 3, 64);
    o.require(v.replay_ok && v.full_sum_zero, "replay");
    o.require(v.two_a_in_cloud == std::vector<bool>{true, true, true}, "2a in clouds");
    o.require(v.cloud_distance.size() == 3, "cloud count");
    for (double d : v.cloud_distance) o.require(d >= 1.125, "cloud distance");
    o.require(v.group_bound >= 1.125 && v.nonconvex, "verdict");
  });

  criterion(11, "gamma_local collapse", 60, [](Outcome& o) {
    SeededRng rng(1111);
    const double alphas[] = {0.5, 0.75, 1.0, 1.5, 2.0};
    for (int t = 0; t < 100; ++t) {
      SeriesSpec s;
      s.dimension = 1 + rng.below(4);
      const std::size_t comps = 1 + rng.below(4);
      for (std::size_t c = 0; c < comps; ++c) {
        Vector d(s.dimension);
        for (double& x : d) x = std::round(rng.uniform(-2, 2));
        if (std::all_of(d.begin(), d.end(), [](double x) { return x == 0.0; })) d[0] = 1.0;
        const double a = alphas[rng.below(5)];
        s.components.push_back({d, rng.below(2) ? ScalarStream::alternating_power(a, rng.uniform(0.5, 2))
                                                : ScalarStream::geometric(rng.uniform(-0.8, 0.8))});
      }
      const GammaReport global = gamma(s);
      const KoetheMatrix grids[] = {KoetheMatrix::power(), KoetheMatrix::geometric(), KoetheMatrix::constant_grid(2)};
      const DiscScale scale = build_hs_scale(grids[t % 3], s.dimension, 2 + rng.below(4));
      const std::vector<GammaReport> local = gamma_local(s, scale);
      o.require(local.size() == scale.levels(), "level count");
      for (const GammaReport& g : local)
        o.require(g.gamma_perp_basis == global.gamma_perp_basis, "spec " + std::to_string(t));
    }
  });

  std::printf("%d of 11 criteria failed\n", failures);
  return failures;
}
