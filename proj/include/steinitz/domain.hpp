#pragma once
// Functionals with absolutely summable images, their annihilator, and the
// affine domain of sums of a structured series.

#include <cstddef>
#include <vector>

#include "steinitz/koethe.hpp"
#include "steinitz/linalg.hpp"
#include "steinitz/series.hpp"

namespace steinitz {

struct GammaReport {
  std::vector<Vector> gamma_basis;       // functionals x' with sum |x'(u_k)| < inf
  std::vector<Vector> gamma_perp_basis;  // their common kernel
  std::vector<Vector> conditional_vectors;

  bool operator==(const GammaReport&) const = default;
};

struct AffineSubspace {
  Vector offset;
  std::vector<Vector> directions;  // orthonormal

  // x - offset with its component along the directions removed.
  Vector residual(std::span<const double> x) const;
  double distance(std::span<const double> x) const { return norm2(residual(x)); }
  bool contains(std::span<const double> x, double tol) const { return distance(x) <= tol; }
};

// Classes of components sharing a signature combine into g_c = sum scale_i d_i;
// the conditional g_c span the annihilator. Rank decisions at 1e-10.
GammaReport gamma(const SeriesSpec& spec);

AffineSubspace domain_of_sums(const SeriesSpec& spec, double tol);

struct Membership {
  bool in_domain = false;
  double distance = 0.0;
  Vector separating_functional;  // unit vector in the span of gamma_basis; empty when inside
};

Membership membership(const SeriesSpec& spec, std::span<const double> x, double tol);

// Tests x - sum against every functional of gamma_basis, the scalar form of
// the same condition.
bool weak_domain_check(const SeriesSpec& spec, std::span<const double> x, double tol);

// One report per disc of the scale, computed in that disc's coordinates.
std::vector<GammaReport> gamma_local(const SeriesSpec& spec, const DiscScale& scale);

// d conditional classes along e_1..e_d: alternating_power with
// alpha_j = 1 - (j-1)/(2d). d = 1 gives the alternating harmonic series.
SeriesSpec dense_domain_series(std::size_t d);

}  // namespace steinitz
