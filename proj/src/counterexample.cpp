#include "steinitz/counterexample.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "steinitz/errors.hpp"
#include "steinitz/kernels.hpp"

namespace steinitz {

DiagonalSeminorm::DiagonalSeminorm(Vector weights) : weights_(std::move(weights)) {
  for (double w : weights_)
    if (!(w >= 0.0) || !std::isfinite(w))
      throw InvalidArgument("DiagonalSeminorm: weights must be finite and >= 0");
}

double DiagonalSeminorm::operator()(std::span<const double> x) const {
  if (x.size() != dim()) throw DimensionMismatch("seminorm: dimension");
  return std::sqrt(kernels::weighted_sq_norm(weights_, x));
}

DiagonalSeminorm DiagonalSeminorm::scaled(double c) const {
  Vector w = weights_;
  for (double& x : w) x *= c * c;
  return DiagonalSeminorm(std::move(w));
}

namespace {

using Key = std::vector<double>;

Key key_of(std::span<const double> v) {
  Key k(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) k[i] = std::round(v[i] * 1e12);
  return k;
}

// Integer combinations with sum |c_j| <= depth, as coefficient vectors.
void l1_ball(std::size_t r, long depth, std::vector<std::vector<long>>& out) {
  std::vector<long> c(r, 0);
  auto rec = [&](auto&& self, std::size_t j, long left) -> void {
    if (j == r) {
      out.push_back(c);
      return;
    }
    for (long v = -left; v <= left; ++v) {
      c[j] = v;
      self(self, j + 1, left - std::abs(v));
    }
    c[j] = 0;
  };
  rec(rec, 0, depth);
}

// Shortest-first search for `goal` as a sum of at most `depth` elements of `parts`.
bool decompose(std::span<const double> goal, const std::vector<Vector>& parts, std::size_t depth,
               std::vector<Vector>& out) {
  const Key goal_key = key_of(goal);
  struct Node {
    Vector sum;
    std::size_t parent;
    std::size_t part;
  };
  std::vector<Node> nodes{{Vector(goal.size(), 0.0), 0, 0}};
  std::map<Key, std::size_t> seen{{key_of(nodes[0].sum), 0}};
  std::size_t level_begin = 0;
  constexpr std::size_t kStateCap = 200000;
  for (std::size_t t = 1; t <= depth; ++t) {
    const std::size_t level_end = nodes.size();
    for (std::size_t i = level_begin; i < level_end; ++i) {
      for (std::size_t j = 0; j < parts.size(); ++j) {
        Vector s = add(nodes[i].sum, parts[j]);
        Key k = key_of(s);
        if (seen.count(k)) continue;
        nodes.push_back({std::move(s), i, j});
        seen.emplace(k, nodes.size() - 1);
        if (k == goal_key) {
          out.clear();
          for (std::size_t n = nodes.size() - 1; n != 0; n = nodes[n].parent)
            out.push_back(parts[nodes[n].part]);
          std::reverse(out.begin(), out.end());
          return true;
        }
        if (nodes.size() > kStateCap) return false;
      }
    }
    level_begin = level_end;
  }
  return false;
}

// Gram-Schmidt data for LLL on the rows of `b`.
void gram_schmidt(const std::vector<Vector>& b, std::vector<Vector>& bstar, Matrix& mu, Vector& sq) {
  const std::size_t n = b.size();
  bstar = b;
  mu = Matrix(n, n);
  sq.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      mu(i, j) = sq[j] > 0.0 ? kernels::dot(b[i], bstar[j]) / sq[j] : 0.0;
      kernels::axpy(-mu(i, j), bstar[j], bstar[i]);
    }
    sq[i] = kernels::dot(bstar[i], bstar[i]);
  }
}

void lll(std::vector<Vector>& b, double delta = 0.99) {
  const std::size_t n = b.size();
  if (n < 2) return;
  std::vector<Vector> bstar;
  Matrix mu;
  Vector sq;
  gram_schmidt(b, bstar, mu, sq);
  std::size_t k = 1;
  std::size_t guard = 0;
  while (k < n && ++guard < 100000) {
    for (std::size_t j = k; j-- > 0;) {
      const double q = std::round(mu(k, j));
      if (q != 0.0) {
        kernels::axpy(-q, b[j], b[k]);
        gram_schmidt(b, bstar, mu, sq);
      }
    }
    if (sq[k] >= (delta - mu(k, k - 1) * mu(k, k - 1)) * sq[k - 1]) {
      ++k;
    } else {
      std::swap(b[k], b[k - 1]);
      gram_schmidt(b, bstar, mu, sq);
      k = std::max<std::size_t>(k - 1, 1);
    }
  }
}

}  // namespace

GenerationReport check_generation(const FinGenGroup& g, const WeightedHilbert& b,
                                  std::size_t m_max, std::size_t search_depth) {
  for (const Vector& v : g.generators)
    if (v.size() != b.dim()) throw DimensionMismatch("check_generation: generator dimension");
  std::vector<std::vector<long>> combos;
  l1_ball(g.generators.size(), static_cast<long>(search_depth), combos);

  std::vector<Vector> elements;
  Vector norms;
  for (const auto& c : combos) {
    Vector v(b.dim(), 0.0);
    for (std::size_t j = 0; j < c.size(); ++j)
      if (c[j] != 0) kernels::axpy(static_cast<double>(c[j]), g.generators[j], v);
    norms.push_back(b.norm(v));
    elements.push_back(std::move(v));
  }

  GenerationReport report;
  for (std::size_t m = 1; m <= m_max; ++m) {
    const double radius = 1.0 / static_cast<double>(m) + 1e-12;
    std::vector<Vector> small;
    std::map<Key, bool> seen;
    for (std::size_t i = 0; i < elements.size(); ++i) {
      if (norms[i] > radius || norms[i] == 0.0) continue;
      if (seen.emplace(key_of(elements[i]), true).second) small.push_back(elements[i]);
    }
    std::vector<std::vector<Vector>> parts_per_generator;
    bool ok = true;
    for (const Vector& gen : g.generators) {
      std::vector<Vector> parts;
      if (!decompose(gen, small, search_depth, parts)) {
        ok = false;
        break;
      }
      parts_per_generator.push_back(std::move(parts));
    }
    report.generated.push_back(ok);
    report.decompositions.push_back(ok ? std::move(parts_per_generator)
                                       : std::vector<std::vector<Vector>>{});
  }
  return report;
}

DistanceReport distance_p(std::span<const double> a, const FinGenGroup& g,
                          const DiagonalSeminorm& p, double radius, std::size_t cap) {
  if (a.size() != p.dim()) throw DimensionMismatch("distance_p: point dimension");
  if (!(radius >= 0.0)) throw InvalidArgument("distance_p: radius must be >= 0");

  // Work in the p-image: coordinates with positive weight, scaled by sqrt(w).
  std::vector<std::size_t> live;
  for (std::size_t i = 0; i < p.dim(); ++i)
    if (p.weights()[i] > 0.0) live.push_back(i);
  const auto image = [&](std::span<const double> x) {
    Vector y(live.size());
    for (std::size_t t = 0; t < live.size(); ++t) y[t] = std::sqrt(p.weights()[live[t]]) * x[live[t]];
    return y;
  };
  const Vector ap = image(a);
  const double pa = norm2(ap);
  std::vector<Vector> gens;
  double scale = 0.0;
  for (const Vector& v : g.generators) {
    if (v.size() != p.dim()) throw DimensionMismatch("distance_p: generator dimension");
    Vector y = image(v);
    if (norm2(y) == 0.0) continue;
    scale = std::max(scale, norm2(y));
    gens.push_back(std::move(y));
  }

  // Lattice basis of the image: LLL on [N * images | I] separates integer
  // relations (short rows, image part ~ 0) from a basis (long rows).
  std::vector<Vector> basis;
  if (!gens.empty()) {
    const std::size_t r = gens.size();
    const std::size_t k = live.size();
    const double big = 1e9 / scale;
    std::vector<Vector> rows;
    for (std::size_t j = 0; j < r; ++j) {
      Vector row(k + r, 0.0);
      for (std::size_t t = 0; t < k; ++t) row[t] = big * gens[j][t];
      row[k + j] = 1.0;
      rows.push_back(std::move(row));
    }
    lll(rows);
    for (const Vector& row : rows) {
      Vector part(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(k));
      for (double& x : part) x /= big;
      if (norm2(part) > 1e-10 * scale) basis.push_back(std::move(part));
    }
    const std::size_t rank = numerical_rank(Matrix::from_rows(gens), 1e-10);
    if (basis.size() != rank)
      throw InvalidArgument("distance_p: p-image of the group is not discrete at working precision");
  }

  DistanceReport rep;
  rep.lattice_rank = basis.size();
  const double shell = pa + radius;

  // Coefficient bounds: z = y B^+, so |z_j| <= |y| * |column j of B^+|.
  std::vector<double> col_norms;
  if (!basis.empty()) {
    const Matrix bm = Matrix::from_rows(basis);
    const Matrix gram = bm * bm.transpose();
    for (std::size_t j = 0; j < basis.size(); ++j) {
      Vector e(basis.size(), 0.0), x;
      e[j] = 1.0;
      if (!solve(gram, e, x)) throw InvalidArgument("distance_p: singular lattice basis");
      // Column j of B^+ = B^T (G^-1 e_j); its norm^2 = x^T G x = x_j.
      col_norms.push_back(std::sqrt(std::max(x[j], 0.0)));
    }
  }
  const auto box_size = [&](double radius_r) {
    double total = 1.0;
    for (double c : col_norms) total *= 2.0 * std::floor(radius_r * c + 1e-9) + 1.0;
    return total;
  };

  double r_used = shell;
  bool overflow = false;
  if (box_size(shell) > static_cast<double>(cap)) {
    overflow = true;
    double lo = 0.0, hi = shell;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (box_size(mid) <= static_cast<double>(cap) ? lo : hi) = mid;
    }
    r_used = lo;
  }

  std::vector<long> bound(basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j)
    bound[j] = static_cast<long>(std::floor(r_used * col_norms[j] + 1e-9));
  std::vector<long> z(basis.size());
  for (std::size_t j = 0; j < z.size(); ++j) z[j] = -bound[j];
  double best = std::numeric_limits<double>::infinity();
  Vector y(live.size());
  while (true) {
    std::fill(y.begin(), y.end(), 0.0);
    for (std::size_t j = 0; j < z.size(); ++j)
      if (z[j] != 0) kernels::axpy(static_cast<double>(z[j]), basis[j], y);
    if (norm2(y) <= r_used * (1.0 + 1e-12)) {
      ++rep.enumerated;
      best = std::min(best, std::sqrt(kernels::weighted_sq_dist(Vector(y.size(), 1.0), ap, y)));
    }
    std::size_t j = 0;
    while (j < z.size() && z[j] == bound[j]) {
      z[j] = -bound[j];
      ++j;
    }
    if (j == z.size()) break;
    ++z[j];
  }
  rep.shell_min = best;
  const double outside = std::max(r_used - pa, 0.0);
  rep.closed = best <= outside;
  rep.lower_bound = std::min(best, outside);
  if (overflow)
    throw EnumerationOverflow("distance_p: coefficient box exceeds " + std::to_string(cap) +
                                  " points; bound certified for a shell of radius " +
                                  std::to_string(r_used),
                              rep.lower_bound);
  return rep;
}

LadderInstance build_ladder(std::size_t d, std::size_t levels) {
  if (levels == 0) throw InvalidArgument("build_ladder: levels must be >= 1");
  if (levels > d)
    throw InsufficientDimension("build_ladder: " + std::to_string(levels) + " levels need " +
                                std::to_string(levels) + " coordinates, have " + std::to_string(d));
  const double big_l = static_cast<double>(levels);
  // e_1 is cheap in B so that 2a is small; fresh coordinate n has B-weight
  // (n/L)^2 so the level-n step (1/2n) e_n has B-norm 1/(2L).
  Vector bw(d, 1.0);
  bw[0] = 1.0 / (16.0 * big_l * big_l);
  for (std::size_t n = 2; n <= levels; ++n) {
    const double r = static_cast<double>(n) / big_l;
    bw[n - 1] = r * r;
  }
  Vector pw(d, 0.0);
  pw[0] = 4.0;

  LadderInstance inst{{}, Vector(d, 0.0), WeightedHilbert(bw), DiagonalSeminorm(pw), levels, {}, {}, {}};
  inst.a[0] = 1.0;
  const Vector two_a = scaled(inst.a, 2.0);
  inst.group.generators.push_back(two_a);
  inst.group.levels.push_back(levels);
  inst.representations.push_back({two_a});
  inst.generators_at_level.push_back(1);
  for (std::size_t n = 2; n <= levels; ++n) {
    const double step = 1.0 / (2.0 * static_cast<double>(n));
    Vector h = two_a;
    h[n - 1] = step;
    Vector k(d, 0.0);
    k[n - 1] = -step;
    inst.group.generators.push_back(h);
    inst.group.levels.push_back(n);
    inst.group.generators.push_back(k);
    inst.group.levels.push_back(n);
    inst.representations.push_back({h, k});
    inst.generators_at_level.push_back(inst.group.generators.size());
  }
  double slack = 0.0;
  for (std::size_t n = 1; n <= levels; ++n) {
    slack += std::ldexp(1.0, -static_cast<int>(n));
    inst.level_bounds.push_back(2.0 - slack);
  }
  return inst;
}

FinGenGroup prefix_group(const FinGenGroup& g, std::size_t count) {
  FinGenGroup out;
  count = std::min(count, g.generators.size());
  out.generators.assign(g.generators.begin(), g.generators.begin() + static_cast<std::ptrdiff_t>(count));
  out.levels.assign(g.levels.begin(), g.levels.begin() + static_cast<std::ptrdiff_t>(count));
  return out;
}

BadSeriesCertificate build_bad_series(std::span<const double> a,
                                      const std::vector<std::vector<Vector>>& representations,
                                      const WeightedHilbert& b, const DiagonalSeminorm& p) {
  const std::size_t d = a.size();
  if (d == 0 || b.dim() != d || p.dim() != d)
    throw RepresentationInvalid("build_bad_series: dimensions of a, B and p differ");
  if (representations.empty()) throw RepresentationInvalid("build_bad_series: no representations");
  const Vector two_a = scaled(a, 2.0);

  BadSeriesCertificate cert;
  cert.a.assign(a.begin(), a.end());
  cert.p = p;
  cert.b = b;
  cert.representations = representations;
  std::vector<Vector> terms;
  for (std::size_t m = 1; m <= representations.size(); ++m) {
    const auto& rep = representations[m - 1];
    if (rep.empty()) throw RepresentationInvalid("representation " + std::to_string(m) + " is empty");
    Vector total(d, 0.0);
    cert.block_starts.push_back(terms.size() + 1);
    std::vector<std::size_t> subset;
    for (const Vector& w : rep) {
      if (w.size() != d) throw RepresentationInvalid("representation term has wrong dimension");
      if (b.norm(w) > 1.0 / static_cast<double>(m) + 1e-12)
        throw RepresentationInvalid("representation " + std::to_string(m) +
                                    " has a term outside (1/m) B");
      for (std::size_t i = 0; i < d; ++i) total[i] += w[i];
      terms.push_back(w);
      subset.push_back(terms.size());
      terms.push_back(scaled(w, -1.0));
    }
    if (total != two_a)
      throw RepresentationInvalid("representation " + std::to_string(m) + " does not sum to 2a exactly");
    cert.tail_subsets.push_back(std::move(subset));
  }
  cert.length = terms.size();
  cert.series.dimension = d;
  for (std::size_t i = 0; i < d; ++i) {
    Vector values(terms.size());
    for (std::size_t k = 0; k < terms.size(); ++k) values[k] = terms[k][i];
    Vector e(d, 0.0);
    e[i] = 1.0;
    cert.series.components.push_back({std::move(e), ScalarStream::finite(std::move(values))});
  }
  return cert;
}

FinGenGroup certificate_group(const BadSeriesCertificate& cert) {
  FinGenGroup g;
  std::map<Key, bool> seen;
  for (std::size_t m = 1; m <= cert.representations.size(); ++m)
    for (const Vector& w : cert.representations[m - 1])
      if (seen.emplace(key_of(w), true).second) {
        g.generators.push_back(w);
        g.levels.push_back(m);
      }
  return g;
}

NonconvexityVerdict verify_nonconvexity(const BadSeriesCertificate& cert, std::size_t m_max,
                                        std::size_t horizon_per_block, std::size_t max_points) {
  NonconvexityVerdict v;
  const std::size_t d = cert.a.size();
  const Vector two_a = scaled(cert.a, 2.0);
  if (cert.series.dimension != d || cert.block_starts.size() != cert.tail_subsets.size())
    throw CertificateReplayFailed("certificate shape is inconsistent");
  try {
    cert.series.validate();
  } catch (const Error& e) {
    throw CertificateReplayFailed(std::string("certificate series invalid: ") + e.what());
  }

  // (i) replay
  const Vector total = partial_sum(cert.series, cert.length);
  for (double x : total)
    if (x != 0.0) throw CertificateReplayFailed("series does not sum to 0");
  v.full_sum_zero = true;
  m_max = std::min(m_max, cert.tail_subsets.size());
  for (std::size_t m = 1; m <= m_max; ++m) {
    Vector s(d, 0.0);
    for (std::size_t k : cert.tail_subsets[m - 1]) {
      if (k < cert.block_starts[m - 1] || k > cert.length)
        throw CertificateReplayFailed("tail subset " + std::to_string(m) + " leaves the tail");
      const Vector u = term(cert.series, k);
      for (std::size_t i = 0; i < d; ++i) s[i] += u[i];
    }
    if (s != two_a)
      throw CertificateReplayFailed("tail subset " + std::to_string(m) + " does not sum to 2a");
  }
  v.replay_ok = true;

  // (ii) enumerated tail sums against the group bound
  const FinGenGroup g = certificate_group(cert);
  const double pa = cert.p(cert.a);
  try {
    const DistanceReport dr = distance_p(cert.a, g, cert.p, pa);
    v.group_bound = dr.lower_bound;
    v.group_bound_closed = dr.closed;
  } catch (const EnumerationOverflow& e) {
    v.group_bound = e.partial_bound;
  }
  bool all_in = true;
  bool separated = v.group_bound > 0.0;
  for (std::size_t m = 1; m <= m_max; ++m) {
    const std::size_t start = cert.block_starts[m - 1];
    const std::size_t horizon = std::min(cert.length, start + horizon_per_block - 1);
    const SubsetSumCloud cloud = enumerate_Zm(cert.series, start, horizon, max_points);
    const bool in = cloud_contains(cloud, two_a, 1e-12);
    double dist = std::numeric_limits<double>::infinity();
    for (const Vector& z : cloud.points) dist = std::min(dist, cert.p(subtract(cert.a, z)));
    v.two_a_in_cloud.push_back(in);
    v.cloud_distance.push_back(dist);
    v.cloud_truncated.push_back(cloud.truncated);
    all_in = all_in && in;
    separated = separated && dist >= v.group_bound - 1e-12;
  }
  v.nonconvex = all_in && separated;
  v.note = v.nonconvex
               ? "2a is a tail subset sum at every level while a stays p-separated from every "
                 "enumerated tail sum: the midpoint of 0 and 2a escapes the enumerated A-approximants"
               : "convexity not contradicted by the enumerated data";
  v.note +=
      "; finite-dimensional realization of the conclusion pattern, the seminorm is not dominated "
      "by the disc norm";
  return v;
}

}  // namespace steinitz
