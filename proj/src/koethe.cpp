#include "steinitz/koethe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "steinitz/errors.hpp"
#include "steinitz/series.hpp"

namespace steinitz {

std::string to_string(GridFamily f) {
  switch (f) {
    case GridFamily::power: return "power";
    case GridFamily::constant: return "constant";
    case GridFamily::geometric: return "geometric";
    case GridFamily::table: return "table";
  }
  return "?";
}

KoetheMatrix KoetheMatrix::power() { return KoetheMatrix{}; }

KoetheMatrix KoetheMatrix::constant_grid(double c) {
  KoetheMatrix a;
  a.family = GridFamily::constant;
  a.constant = c;
  return a;
}

KoetheMatrix KoetheMatrix::geometric(Vector rates) {
  KoetheMatrix a;
  a.family = GridFamily::geometric;
  a.rates = std::move(rates);
  return a;
}

KoetheMatrix KoetheMatrix::tabulated(std::vector<Vector> rows) {
  KoetheMatrix a;
  a.family = GridFamily::table;
  a.rows = std::move(rows);
  return a;
}

namespace {

double geometric_rate(const KoetheMatrix& a, std::size_t n) {
  if (a.rates.empty()) return 1.0 - std::ldexp(1.0, -static_cast<int>(std::min<std::size_t>(n, 1000)));
  if (n > a.rates.size()) throw IndexOutOfRange("geometric grid: no rate for level " + std::to_string(n));
  return a.rates[n - 1];
}

}  // namespace

double KoetheMatrix::a(std::size_t n, std::size_t i) const {
  if (n == 0 || i == 0) throw IndexOutOfRange("Koethe indices start at 1");
  switch (family) {
    case GridFamily::power: return std::pow(static_cast<double>(i), static_cast<double>(n));
    case GridFamily::constant: return constant;
    case GridFamily::geometric: return std::pow(geometric_rate(*this, n), static_cast<double>(i));
    case GridFamily::table:
      if (n > rows.size() || i > rows[n - 1].size())
        throw IndexOutOfRange("table grid: entry (" + std::to_string(n) + ", " + std::to_string(i) +
                              ") outside the table");
      return rows[n - 1][i - 1];
  }
  return 0.0;
}

std::size_t KoetheMatrix::levels() const {
  if (family == GridFamily::table) return rows.size();
  if (family == GridFamily::geometric && !rates.empty()) return rates.size();
  return std::numeric_limits<std::size_t>::max();
}

std::size_t KoetheMatrix::width() const {
  if (family != GridFamily::table) return std::numeric_limits<std::size_t>::max();
  std::size_t w = std::numeric_limits<std::size_t>::max();
  for (const Vector& r : rows) w = std::min(w, r.size());
  return rows.empty() ? 0 : w;
}

void KoetheMatrix::validate(std::size_t n_max, std::size_t i_max) const {
  if (family == GridFamily::table && rows.empty()) throw InvalidArgument("table grid is empty");
  if (family == GridFamily::constant && !(constant > 0.0 && std::isfinite(constant)))
    throw InvalidArgument("constant grid needs c > 0");
  const std::size_t nn = std::min(n_max, levels());
  if (family == GridFamily::geometric) {
    // r^i underflows long before i_max; the rule itself decides: r_n > 0 and
    // r_n <= r_{n+1} give 0 < a_n(i) <= a_{n+1}(i) for every i.
    for (std::size_t n = 1; n <= nn; ++n) {
      const double r = a(n, 1);
      if (!(r > 0.0) || !std::isfinite(r))
        throw InvalidArgument("geometric grid needs positive rates, level " + std::to_string(n));
      if (n + 1 <= nn && !(r <= a(n + 1, 1)))
        throw InvalidArgument("Koethe matrix is not increasing at n=" + std::to_string(n));
    }
    return;
  }
  const std::size_t ii = std::min(i_max, width());
  for (std::size_t n = 1; n <= nn; ++n) {
    for (std::size_t i = 1; i <= ii; ++i) {
      const double v = a(n, i);
      if (!(v > 0.0) || !std::isfinite(v))
        throw InvalidArgument("Koethe entry a_" + std::to_string(n) + "(" + std::to_string(i) +
                              ") is not a positive finite number");
      if (n + 1 <= nn && !(v <= a(n + 1, i)))
        throw InvalidArgument("Koethe matrix is not increasing at n=" + std::to_string(n) +
                              ", i=" + std::to_string(i));
    }
  }
}

NuclearityVerdict nuclearity_test(const KoetheMatrix& a, std::size_t n_max, std::size_t m_max,
                                  double tail_tol) {
  if (a.family == GridFamily::table)
    throw UndecidableFamily("a finite table cannot certify summability of an infinite tail");
  if (!(n_max < m_max)) throw InvalidArgument("nuclearity_test: need n_max < m_max");
  if (!(tail_tol > 0.0)) throw InvalidArgument("nuclearity_test: tail tolerance must be > 0");
  a.validate(m_max, 64);

  NuclearityVerdict v;
  v.n_max = n_max;
  v.m_max = m_max;
  for (std::size_t n = 1; n <= n_max; ++n) {
    bool found = false;
    for (std::size_t m = n + 1; m <= m_max && !found; ++m) {
      // The ratio sequence i -> a_n(i)/a_m(i) is itself a closed-family stream.
      ScalarStream ratio;
      switch (a.family) {
        case GridFamily::power:
          ratio = ScalarStream::power(static_cast<double>(m - n));
          break;
        case GridFamily::constant:
          continue;  // ratio identically 1
        case GridFamily::geometric: {
          const double q = geometric_rate(a, n) / geometric_rate(a, m);
          if (!(q < 1.0)) continue;
          ratio = ScalarStream::geometric(q);
          break;
        }
        case GridFamily::table: break;
      }
      if (ratio.family == Family::power && ratio.alpha <= 1.0) continue;
      v.witness.push_back(m);
      v.ratio_sums.push_back(stream_sum(ratio, tail_tol).value);
      found = true;
    }
    if (!found) {
      v.failing_n = n;
      v.witness.clear();
      v.ratio_sums.clear();
      return v;
    }
  }
  v.nuclear = true;
  return v;
}

double dual_norm(std::span<const double> u, const KoetheMatrix& a, std::size_t n) {
  double best = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] == 0.0) continue;
    best = std::max(best, std::abs(u[i]) / a.a(n, i + 1));
  }
  return best;
}

const WeightedHilbert& DiscScale::disc(std::size_t n) const {
  if (n == 0 || n > discs.size())
    throw IndexOutOfRange("disc index " + std::to_string(n) + " outside 1.." +
                          std::to_string(discs.size()));
  return discs[n - 1];
}

namespace {

Vector disc_weights(const KoetheMatrix& a, std::size_t n, std::size_t dim, double radius) {
  Vector w(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    const double r = radius * a.a(n, i + 1);
    w[i] = 1.0 / (r * r);
  }
  return w;
}

}  // namespace

DiscScale build_hs_scale(const KoetheMatrix& a, std::size_t dim, std::size_t levels) {
  if (levels < 2) throw InvalidArgument("build_hs_scale: need at least 2 levels");
  if (dim == 0) throw InvalidArgument("build_hs_scale: dimension must be >= 1");
  a.validate(levels, dim);

  DiscScale scale;
  scale.truncation_dim = dim;
  double radius = 1.0;
  scale.discs.emplace_back(disc_weights(a, 1, dim, radius));
  scale.rescale_factors.push_back(1.0);
  for (std::size_t n = 1; n < levels; ++n) {
    const WeightedHilbert raw_next(disc_weights(a, n + 1, dim, radius));
    const double raw = hs_norm(LinearMap::identity(scale.discs.back(), raw_next));
    scale.raw_links.push_back(raw);
    double factor = std::max(1.0, 2.0 * raw);
    // Nudge past rounding so the link lands at or below 1/2.
    while (true) {
      WeightedHilbert next(disc_weights(a, n + 1, dim, radius * factor));
      if (hs_norm(LinearMap::identity(scale.discs.back(), next)) <= 0.5) {
        scale.discs.push_back(std::move(next));
        break;
      }
      factor *= 1.0 + 4.0 * std::numeric_limits<double>::epsilon();
    }
    radius *= factor;
    scale.rescale_factors.push_back(factor);
  }
  return scale;
}

double hs_link(const DiscScale& scale, std::size_t n) {
  if (n == 0 || n >= scale.levels())
    throw IndexOutOfRange("hs_link: need 1 <= n < " + std::to_string(scale.levels()));
  return hs_norm(LinearMap::identity(scale.discs[n - 1], scale.discs[n]));
}

double hs_embedding(const DiscScale& scale, std::size_t n, std::size_t m) {
  if (n == 0 || n > m || m > scale.levels())
    throw IndexOutOfRange("hs_embedding: need 1 <= n <= m <= levels");
  return hs_norm(LinearMap::identity(scale.discs[n - 1], scale.discs[m - 1]));
}

void validate_scale(const DiscScale& scale, double slack) {
  if (scale.discs.empty()) throw InvalidArgument("scale has no discs");
  for (const WeightedHilbert& d : scale.discs)
    if (d.dim() != scale.truncation_dim) throw InvalidArgument("scale: disc dimension mismatch");
  for (std::size_t n = 1; n < scale.levels(); ++n) {
    const Vector& w0 = scale.discs[n - 1].weights();
    const Vector& w1 = scale.discs[n].weights();
    for (std::size_t i = 0; i < w0.size(); ++i)
      if (w1[i] > w0[i]) throw InvalidArgument("scale: discs are not nested");
    if (hs_link(scale, n) > 0.5 + slack)
      throw InvalidArgument("scale: link " + std::to_string(n) + " exceeds 1/2");
  }
}

}  // namespace steinitz
