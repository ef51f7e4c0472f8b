#pragma once
// Seeded instance generators and brute-force oracles shared by the unit and
// acceptance tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "steinitz/hilbert.hpp"
#include "steinitz/rearranger.hpp"
#include "steinitz/rng.hpp"

namespace testing_support {

using steinitz::Matrix;
using steinitz::SeededRng;
using steinitz::Vector;
using steinitz::WeightedHilbert;

inline double weighted_norm(const Vector& w, const Vector& x) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * x[i] * x[i];
  return std::sqrt(s);
}

// Uniform-ish point of the unit ball of the space with weights w.
inline Vector ball_point(SeededRng& rng, const Vector& w, double radius = 1.0) {
  Vector g = rng.gaussian_vector(w.size());
  const double n = weighted_norm(w, g);
  const double r = radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(w.size()));
  for (double& x : g) x *= r / n;
  return g;
}

// Weights v with sum_i v_i / u_i = budget^2, i.e. HS(id: (u) -> (v)) = budget.
inline Vector linked_weights(SeededRng& rng, const Vector& u, double budget) {
  Vector share(u.size());
  for (double& s : share) s = rng.uniform(0.2, 1.0);
  const double total = std::accumulate(share.begin(), share.end(), 0.0);
  Vector v(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) v[i] = u[i] * budget * budget * share[i] / total;
  return v;
}

inline Vector random_weights(SeededRng& rng, std::size_t d) {
  Vector w(d);
  for (double& x : w) x = rng.uniform(0.5, 2.0);
  return w;
}

inline steinitz::RoundOffInstance roundoff_instance(SeededRng& rng, std::size_t s_max, std::size_t d_max) {
  const std::size_t d = 1 + rng.below(d_max);
  const std::size_t s = 1 + rng.below(s_max);
  const Vector w1 = random_weights(rng, d);
  const Vector w2 = linked_weights(rng, w1, rng.uniform(0.5, 1.0));
  std::vector<Vector> pts;
  for (std::size_t k = 0; k < s; ++k) pts.push_back(ball_point(rng, w1));
  Vector y(d, 0.0);
  for (const Vector& p : pts) {
    const double lambda = rng.uniform();
    for (std::size_t i = 0; i < d; ++i) y[i] += lambda * p[i];
  }
  return {pts, WeightedHilbert(w1), WeightedHilbert(w2), y};
}

inline double best_subset_error(const steinitz::RoundOffInstance& inst) {
  const std::size_t s = inst.points.size();
  double best = INFINITY;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << s); ++mask) {
    Vector diff(inst.target.size());
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = -inst.target[i];
    for (std::size_t k = 0; k < s; ++k)
      if (mask >> k & 1)
        for (std::size_t i = 0; i < diff.size(); ++i) diff[i] += inst.points[k][i];
    best = std::min(best, weighted_norm(inst.h2.weights(), diff));
  }
  return best;
}

inline double subset_error(const steinitz::RoundOffInstance& inst, const std::vector<std::size_t>& subset) {
  Vector diff(inst.target.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = -inst.target[i];
  for (std::size_t k : subset)
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] += inst.points[k][i];
  return weighted_norm(inst.h2.weights(), diff);
}

inline steinitz::PermInstance perm_instance(SeededRng& rng, std::size_t s_max, std::size_t d_max) {
  const std::size_t d = 1 + rng.below(d_max);
  const std::size_t s = 1 + rng.below(s_max);
  const Vector w1 = random_weights(rng, d);
  const Vector w2 = linked_weights(rng, w1, rng.uniform(0.6, 1.0));
  const Vector w3 = linked_weights(rng, w2, rng.uniform(0.3, 0.5));
  // Centred vectors so the full sum is small, then an anchor that keeps the
  // total inside the H2 ball.
  std::vector<Vector> v;
  for (std::size_t k = 0; k < s; ++k) v.push_back(ball_point(rng, w1));
  Vector mean(d, 0.0);
  for (const Vector& x : v)
    for (std::size_t i = 0; i < d; ++i) mean[i] += x[i] / static_cast<double>(s);
  const bool centre = s > 1 && rng.uniform() < 0.8;
  double worst = 0.0;
  for (Vector& x : v) {
    if (centre)
      for (std::size_t i = 0; i < d; ++i) x[i] -= mean[i];
    worst = std::max(worst, weighted_norm(w1, x));
  }
  if (worst > 1.0)
    for (Vector& x : v)
      for (double& c : x) c /= worst;
  Vector total(d, 0.0);
  for (const Vector& x : v)
    for (std::size_t i = 0; i < d; ++i) total[i] += x[i];
  Vector target = ball_point(rng, w2, 0.9);
  Vector anchor(d);
  for (std::size_t i = 0; i < d; ++i) anchor[i] = target[i] - total[i];
  const double an = weighted_norm(w2, anchor);
  if (an > 1.0) {
    // Shrink towards the total so both anchor and end point stay in B_{H2}.
    for (std::size_t i = 0; i < d; ++i) anchor[i] /= an;
    target.assign(d, 0.0);
    for (std::size_t i = 0; i < d; ++i) target[i] = anchor[i] + total[i];
    const double tn = weighted_norm(w2, target);
    if (tn > 1.0) {
      for (Vector& x : v) x.assign(d, 0.0);
      v.resize(1);
      anchor = ball_point(rng, w2, 0.5);
    }
  }
  return {v, anchor, WeightedHilbert(w1), WeightedHilbert(w2), WeightedHilbert(w3)};
}

// Depth-first search over all orders with prefix pruning: true when some
// order keeps every prefix in B_{H3}.
inline bool some_order_bounded(const steinitz::PermInstance& inst) {
  const std::size_t s = inst.vectors.size();
  std::vector<char> used(s, 0);
  const Vector& w3 = inst.h3.weights();
  auto rec = [&](auto&& self, Vector& acc, std::size_t depth) -> bool {
    if (depth == s) return true;
    for (std::size_t k = 0; k < s; ++k) {
      if (used[k]) continue;
      Vector next = acc;
      for (std::size_t i = 0; i < next.size(); ++i) next[i] += inst.vectors[k][i];
      if (weighted_norm(w3, next) > 1.0 + 1e-12) continue;
      used[k] = 1;
      const bool ok = self(self, next, depth + 1);
      used[k] = 0;
      if (ok) return true;
    }
    return false;
  };
  Vector acc = inst.anchor;
  return rec(rec, acc, 0);
}

inline double prefix_max(const steinitz::PermInstance& inst, const std::vector<std::size_t>& order) {
  Vector acc = inst.anchor;
  double worst = 0.0;
  for (std::size_t k : order) {
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += inst.vectors[k][i];
    worst = std::max(worst, weighted_norm(inst.h3.weights(), acc));
  }
  return worst;
}

inline bool is_permutation_of_range(std::vector<std::size_t> order, std::size_t s) {
  std::sort(order.begin(), order.end());
  for (std::size_t i = 0; i < order.size(); ++i)
    if (order[i] != i) return false;
  return order.size() == s;
}

}  // namespace testing_support
