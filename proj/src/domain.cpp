#include "steinitz/domain.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "steinitz/errors.hpp"
#include "steinitz/kernels.hpp"

namespace steinitz {

namespace {

constexpr double kRankTol = 1e-10;

// Summation tolerance used when a membership decision is made at `tol`.
double offset_tolerance(double tol) { return std::max(tol * 0.25, 1e-13); }

Vector project_off(std::span<const double> v, const std::vector<Vector>& basis) {
  Vector r(v.begin(), v.end());
  for (int pass = 0; pass < 2; ++pass)
    for (const Vector& b : basis) kernels::axpy(-kernels::dot(r, b), b, r);
  return r;
}

bool same_subspace(const std::vector<Vector>& a, const std::vector<Vector>& b, double tol) {
  if (a.size() != b.size()) return false;
  for (const Vector& v : a)
    if (norm2(project_off(v, b)) > tol) return false;
  return true;
}

}  // namespace

Vector AffineSubspace::residual(std::span<const double> x) const {
  if (x.size() != offset.size()) throw DimensionMismatch("affine subspace: dimension");
  return project_off(subtract(x, offset), directions);
}

GammaReport gamma(const SeriesSpec& spec) {
  spec.validate();
  struct Class {
    Vector combination;
    double magnitude = 0.0;
    Convergence type = Convergence::absolute;
  };
  std::map<Signature, Class> classes;
  for (const Component& c : spec.components) {
    Class& cls = classes[signature(c.stream)];
    if (cls.combination.empty()) cls.combination.assign(spec.dimension, 0.0);
    kernels::axpy(c.stream.scale, c.direction, cls.combination);
    cls.magnitude += std::abs(c.stream.scale) * norm2(c.direction);
    cls.type = classify_stream(c.stream);
  }
  GammaReport report;
  for (const auto& [sig, cls] : classes) {
    if (cls.type != Convergence::conditional) continue;
    // A class whose scales cancel leaves an absolutely summable remainder.
    if (norm2(cls.combination) <= kRankTol * cls.magnitude) continue;
    report.conditional_vectors.push_back(cls.combination);
  }
  report.gamma_perp_basis = canonical_basis(report.conditional_vectors, spec.dimension, kRankTol);
  report.gamma_basis = orthogonal_complement(report.gamma_perp_basis, spec.dimension, kRankTol);
  return report;
}

AffineSubspace domain_of_sums(const SeriesSpec& spec, double tol) {
  AffineSubspace s;
  s.offset = sum(spec, tol).value;
  s.directions = gamma(spec).gamma_perp_basis;
  return s;
}

Membership membership(const SeriesSpec& spec, std::span<const double> x, double tol) {
  if (x.size() != spec.dimension) throw DimensionMismatch("membership: point dimension");
  const AffineSubspace dom = domain_of_sums(spec, offset_tolerance(tol));
  Membership m;
  const Vector r = dom.residual(x);
  m.distance = norm2(r);
  m.in_domain = m.distance <= tol;
  if (!m.in_domain) m.separating_functional = scaled(r, 1.0 / m.distance);
  return m;
}

bool weak_domain_check(const SeriesSpec& spec, std::span<const double> x, double tol) {
  if (x.size() != spec.dimension) throw DimensionMismatch("weak_domain_check: point dimension");
  const GammaReport g = gamma(spec);
  const Vector displacement = subtract(x, sum(spec, offset_tolerance(tol)).value);
  double sq = 0.0;
  for (const Vector& f : g.gamma_basis) {
    const double v = kernels::dot(f, displacement);
    sq += v * v;
  }
  return std::sqrt(sq) <= tol;
}

std::vector<GammaReport> gamma_local(const SeriesSpec& spec, const DiscScale& scale) {
  if (scale.truncation_dim != spec.dimension)
    throw DimensionMismatch("gamma_local: scale dimension " + std::to_string(scale.truncation_dim) +
                            " differs from series dimension " + std::to_string(spec.dimension));
  const GammaReport global = gamma(spec);
  std::vector<GammaReport> out;
  for (const WeightedHilbert& disc : scale.discs) {
    // Functionals continuous on E_B act on disc coordinates y = W^{1/2} x.
    Vector root(disc.dim());
    for (std::size_t i = 0; i < disc.dim(); ++i) root[i] = std::sqrt(disc.weights()[i]);
    std::vector<Vector> local_vectors;
    for (const Vector& g : global.conditional_vectors) {
      Vector y = g;
      for (std::size_t i = 0; i < y.size(); ++i) y[i] *= root[i];
      local_vectors.push_back(std::move(y));
    }
    std::vector<Vector> back;
    for (Vector b : canonical_basis(local_vectors, spec.dimension, kRankTol)) {
      for (std::size_t i = 0; i < b.size(); ++i) b[i] /= root[i];
      back.push_back(std::move(b));
    }
    GammaReport local;
    local.conditional_vectors = global.conditional_vectors;
    local.gamma_perp_basis = canonical_basis(back, spec.dimension, kRankTol);
    // The canonical form is a function of the subspace: when the per-disc
    // subspace agrees with the global one, report the global representative.
    if (same_subspace(local.gamma_perp_basis, global.gamma_perp_basis, 1e-9)) {
      local.gamma_perp_basis = global.gamma_perp_basis;
      local.gamma_basis = global.gamma_basis;
    } else {
      local.gamma_basis = orthogonal_complement(local.gamma_perp_basis, spec.dimension, kRankTol);
    }
    out.push_back(std::move(local));
  }
  return out;
}

SeriesSpec dense_domain_series(std::size_t d) {
  if (d == 0) throw InvalidArgument("dense_domain_series: d must be >= 1");
  SeriesSpec spec;
  spec.dimension = d;
  for (std::size_t j = 1; j <= d; ++j) {
    Vector e(d, 0.0);
    e[j - 1] = 1.0;
    const double alpha = 1.0 - static_cast<double>(j - 1) / (2.0 * static_cast<double>(d));
    spec.components.push_back({std::move(e), ScalarStream::alternating_power(alpha)});
  }
  return spec;
}

}  // namespace steinitz
