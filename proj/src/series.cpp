#include "steinitz/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "steinitz/errors.hpp"

namespace steinitz {

std::string to_string(Family f) {
  switch (f) {
    case Family::power: return "power";
    case Family::alternating_power: return "alternating_power";
    case Family::geometric: return "geometric";
    case Family::finite: return "finite";
  }
  return "?";
}

std::string to_string(Convergence c) {
  switch (c) {
    case Convergence::absolute: return "absolute";
    case Convergence::conditional: return "conditional";
    case Convergence::divergent: return "divergent";
  }
  return "?";
}

ScalarStream ScalarStream::power(double alpha, double scale) {
  ScalarStream s;
  s.family = Family::power;
  s.alpha = alpha;
  s.scale = scale;
  return s;
}

ScalarStream ScalarStream::alternating_power(double alpha, double scale) {
  ScalarStream s = power(alpha, scale);
  s.family = Family::alternating_power;
  return s;
}

ScalarStream ScalarStream::geometric(double ratio, double scale) {
  ScalarStream s;
  s.family = Family::geometric;
  s.ratio = ratio;
  s.scale = scale;
  return s;
}

ScalarStream ScalarStream::finite(Vector values) {
  ScalarStream s;
  s.family = Family::finite;
  s.values = std::move(values);
  return s;
}

double ScalarStream::value(std::size_t k) const {
  if (k == 0) throw InvalidArgument("stream index starts at 1");
  const double kd = static_cast<double>(k);
  switch (family) {
    case Family::power: return scale * std::pow(kd, -alpha);
    case Family::alternating_power: {
      const double t = scale * std::pow(kd, -alpha);
      return k % 2 == 1 ? t : -t;
    }
    case Family::geometric: return scale * std::pow(ratio, kd);
    case Family::finite: return k <= values.size() ? values[k - 1] : 0.0;
  }
  return 0.0;
}

void ScalarStream::validate() const {
  for (double v : values)
    if (!std::isfinite(v)) throw InvalidArgument("stream: non-finite value");
  if (family == Family::finite) return;
  if (!std::isfinite(scale) || scale == 0.0) throw InvalidArgument("stream: scale must be nonzero");
  if ((family == Family::power || family == Family::alternating_power) &&
      !(alpha > 0.0 && std::isfinite(alpha)))
    throw InvalidArgument("stream: alpha must be > 0");
  if (family == Family::geometric && !(std::abs(ratio) < 1.0))
    throw InvalidArgument("stream: |ratio| must be < 1");
}

Convergence classify_stream(const ScalarStream& s) {
  switch (s.family) {
    case Family::power: return s.alpha > 1.0 ? Convergence::absolute : Convergence::divergent;
    case Family::alternating_power:
      return s.alpha > 1.0 ? Convergence::absolute : Convergence::conditional;
    case Family::geometric:
    case Family::finite: return Convergence::absolute;
  }
  return Convergence::divergent;
}

Signature signature(const ScalarStream& s) {
  switch (s.family) {
    case Family::power:
    case Family::alternating_power: return {s.family, s.alpha};
    case Family::geometric: return {s.family, s.ratio};
    case Family::finite: return {s.family, 0.0};
  }
  return {s.family, 0.0};
}

void SeriesSpec::validate() const {
  if (dimension == 0) throw InvalidArgument("series: dimension must be >= 1");
  if (components.empty()) throw InvalidArgument("series: no components");
  for (const Component& c : components) {
    if (c.direction.size() != dimension)
      throw InvalidArgument("series: direction length differs from dimension");
    if (norm2(c.direction) == 0.0) throw InvalidArgument("series: zero direction");
    for (double x : c.direction)
      if (!std::isfinite(x)) throw InvalidArgument("series: non-finite direction");
    c.stream.validate();
    if (classify_stream(c.stream) == Convergence::divergent)
      throw DivergentSeries("series: component stream " + to_string(c.stream.family) +
                            " with alpha " + std::to_string(c.stream.alpha) + " diverges");
  }
}

Vector term(const SeriesSpec& spec, std::size_t k) {
  Vector u(spec.dimension, 0.0);
  for (const Component& c : spec.components) {
    const double s = c.stream.value(k);
    if (s == 0.0) continue;
    for (std::size_t i = 0; i < spec.dimension; ++i) u[i] += s * c.direction[i];
  }
  return u;
}

Vector partial_sum(const SeriesSpec& spec, std::size_t n) {
  Vector s(spec.dimension, 0.0);
  for (std::size_t k = 1; k <= n; ++k) {
    const Vector u = term(spec, k);
    for (std::size_t i = 0; i < spec.dimension; ++i) s[i] += u[i];
  }
  return s;
}

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Compensated (Neumaier) running sum; also tracks sum of magnitudes for the
// rounding allowance.
struct Accumulator {
  double sum = 0.0;
  double comp = 0.0;
  double magnitude = 0.0;

  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
    magnitude += std::abs(x);
  }
  double value() const { return sum + comp; }
  // Covers the summation error plus a few ulps per evaluated term.
  double allowance() const { return 8.0 * kEps * magnitude + 2.0 * kEps * std::abs(value()); }
};

// Integral of t^-alpha over [a, b], b may be +inf.
double power_integral(double alpha, double a, double b) {
  if (std::isinf(b)) return std::pow(a, 1.0 - alpha) / (alpha - 1.0);
  const double log_ratio = std::log1p((b - a) / a);
  if (alpha == 1.0) return log_ratio;
  return std::pow(a, 1.0 - alpha) * std::expm1((1.0 - alpha) * log_ratio) / (1.0 - alpha);
}

}  // namespace

double sup_abs_after(const ScalarStream& s, std::size_t n) {
  const double next = static_cast<double>(n + 1);
  switch (s.family) {
    case Family::power:
    case Family::alternating_power: return std::abs(s.scale) * std::pow(next, -s.alpha);
    case Family::geometric: return std::abs(s.scale) * std::pow(std::abs(s.ratio), next);
    case Family::finite: {
      double m = 0.0;
      for (std::size_t k = n; k < s.values.size(); ++k) m = std::max(m, std::abs(s.values[k]));
      return m;
    }
  }
  return 0.0;
}

double abs_tail_bound(const ScalarStream& s, std::size_t n) {
  switch (s.family) {
    case Family::power:
    case Family::alternating_power:
      if (s.alpha <= 1.0) return std::numeric_limits<double>::infinity();
      // Midpoint rule under-estimates integrals of convex functions.
      return std::abs(s.scale) * power_integral(s.alpha, static_cast<double>(n) + 0.5,
                                                std::numeric_limits<double>::infinity()) *
             (1.0 + 1e-12);
    case Family::geometric: {
      const double r = std::abs(s.ratio);
      return std::abs(s.scale) * std::pow(r, static_cast<double>(n + 1)) / (1.0 - r) *
             (1.0 + 1e-12);
    }
    case Family::finite: {
      Accumulator acc;
      for (std::size_t k = n; k < s.values.size(); ++k) acc.add(std::abs(s.values[k]));
      return acc.value() + acc.allowance();
    }
  }
  return 0.0;
}

CertifiedScalar stream_tail(const ScalarStream& s, std::size_t n) {
  const double inf = std::numeric_limits<double>::infinity();
  switch (s.family) {
    case Family::power: {
      if (s.alpha <= 1.0) throw DivergentSeries("power stream with alpha <= 1 has no tail sum");
      // f convex decreasing: trapezoid gives a lower bound, midpoint an upper.
      const double a = static_cast<double>(n + 1);
      const double lo = power_integral(s.alpha, a, inf) + 0.5 * std::pow(a, -s.alpha);
      const double hi = power_integral(s.alpha, a - 0.5, inf);
      const double mid = 0.5 * (lo + hi);
      return {s.scale * mid, std::abs(s.scale) * (0.5 * (hi - lo) + 8.0 * kEps * hi)};
    }
    case Family::alternating_power: {
      if (n == 0) {
        CertifiedScalar rest = stream_tail(s, 1);
        return {s.value(1) + rest.value, rest.error + 2.0 * kEps * std::abs(s.scale)};
      }
      // Tail = (-1)^n * sum_i g(n+1+2i) with g(t) = f(t) - f(t+1) convex
      // decreasing; compare the step-2 sum with integrals of g.
      const double a = static_cast<double>(n + 1);
      const double g_a = std::pow(a, -s.alpha) - std::pow(a + 1.0, -s.alpha);
      const double lo = 0.5 * power_integral(s.alpha, a, a + 1.0) + 0.5 * g_a;
      const double hi = 0.5 * power_integral(s.alpha, a - 1.0, a);
      const double mid = 0.5 * (lo + hi);
      const double sign = n % 2 == 0 ? 1.0 : -1.0;
      return {sign * s.scale * mid, std::abs(s.scale) * (0.5 * (hi - lo) + 8.0 * kEps * hi)};
    }
    case Family::geometric: {
      const double v = s.scale * std::pow(s.ratio, static_cast<double>(n + 1)) / (1.0 - s.ratio);
      return {v, 4.0 * kEps * std::abs(v)};
    }
    case Family::finite: {
      Accumulator acc;
      for (std::size_t k = n; k < s.values.size(); ++k) acc.add(s.values[k]);
      return {acc.value(), acc.allowance()};
    }
  }
  return {};
}

CertifiedScalar stream_sum(const ScalarStream& s, double tol, std::size_t cap) {
  if (!(tol > 0.0)) throw InvalidArgument("sum: tolerance must be > 0");
  if (classify_stream(s) == Convergence::divergent)
    throw DivergentSeries("sum of a divergent stream");
  if (s.family == Family::geometric || s.family == Family::finite) {
    CertifiedScalar whole = stream_tail(s, 0);
    if (s.family == Family::geometric) {
      // scale * r / (1 - r), exact for dyadic inputs such as r = 1/2.
      whole.value = s.scale * s.ratio / (1.0 - s.ratio);
    }
    return whole;
  }
  Accumulator acc;
  std::size_t n = 0;
  std::size_t next = 16;
  while (true) {
    if (next > cap)
      throw ToleranceUnreachable("sum: tolerance needs more than " + std::to_string(cap) +
                                     " terms",
                                 next);
    for (std::size_t k = n + 1; k <= next; ++k) acc.add(s.value(k));
    n = next;
    const CertifiedScalar tail = stream_tail(s, n);
    const double error = tail.error + acc.allowance();
    if (error <= tol) return {acc.value() + tail.value, error + 2.0 * kEps * std::abs(tail.value)};
    next = 2 * n;
  }
}

CertifiedSum sum(const SeriesSpec& spec, double tol, std::size_t cap) {
  spec.validate();
  if (!(tol > 0.0)) throw InvalidArgument("sum: tolerance must be > 0");
  CertifiedSum out;
  out.value.assign(spec.dimension, 0.0);
  const double share = 0.5 * tol / static_cast<double>(spec.components.size());
  double assembled = 0.0;
  for (const Component& c : spec.components) {
    const double dn = norm2(c.direction);
    const CertifiedScalar cs = stream_sum(c.stream, share / dn, cap);
    for (std::size_t i = 0; i < spec.dimension; ++i) out.value[i] += cs.value * c.direction[i];
    out.error_bound += cs.error * dn;
    assembled += std::abs(cs.value) * dn;
  }
  out.error_bound += 4.0 * kEps * assembled * static_cast<double>(spec.components.size());
  return out;
}

SubsetSumCloud enumerate_Zm(const SeriesSpec& spec, std::size_t m, std::size_t horizon,
                            std::size_t max_points) {
  if (m == 0) throw InvalidArgument("enumerate_Zm: m starts at 1");
  if (max_points == 0) throw InvalidArgument("enumerate_Zm: max_points must be >= 1");
  if (horizon >= m && horizon - m > 30 && max_points == std::numeric_limits<std::size_t>::max())
    throw InvalidArgument("enumerate_Zm: more than 31 terms needs a point cap");

  using Key = std::vector<double>;
  struct Entry {
    Vector point;
    std::size_t cardinality;
  };
  auto key_of = [](const Vector& p) {
    Key k(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) k[i] = std::round(p[i] * 1e12);
    return k;
  };

  SubsetSumCloud cloud;
  cloud.m = m;
  cloud.horizon = horizon;
  std::map<Key, Entry> points;
  const Vector zero(spec.dimension, 0.0);
  points.emplace(key_of(zero), Entry{zero, 0});

  for (std::size_t h = m; h <= horizon; ++h) {
    const Vector u = term(spec, h);
    std::vector<Entry> fresh;
    fresh.reserve(points.size());
    for (const auto& [key, e] : points) fresh.push_back({add(e.point, u), e.cardinality + 1});
    for (Entry& e : fresh) {
      auto [it, inserted] = points.try_emplace(key_of(e.point), e);
      if (!inserted) it->second.cardinality = std::min(it->second.cardinality, e.cardinality);
    }
    if (points.size() > max_points) {
      cloud.truncated = true;
      std::vector<std::pair<std::size_t, const Key*>> order;
      for (const auto& [key, e] : points) order.emplace_back(e.cardinality, &key);
      std::stable_sort(order.begin(), order.end(),
                       [](const auto& a, const auto& b) { return a.first < b.first; });
      std::map<Key, Entry> kept;
      for (std::size_t i = 0; i < max_points; ++i) kept.emplace(*order[i].second, points.at(*order[i].second));
      points = std::move(kept);
    }
  }
  cloud.points.reserve(points.size());
  for (auto& [key, e] : points) cloud.points.push_back(std::move(e.point));
  return cloud;
}

bool cloud_contains(const SubsetSumCloud& cloud, std::span<const double> x, double tol) {
  for (const Vector& p : cloud.points) {
    if (p.size() != x.size()) throw DimensionMismatch("cloud_contains: dimension");
    double d2 = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) d2 += (p[i] - x[i]) * (p[i] - x[i]);
    if (std::sqrt(d2) <= tol) return true;
  }
  return false;
}

}  // namespace steinitz
