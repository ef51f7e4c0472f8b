#pragma once
// Membership in the zonotope sum_k [0,1] y_k by a bounded-variable simplex.

#include <cstddef>
#include <span>
#include <vector>

#include "steinitz/linalg.hpp"

namespace steinitz {

struct ZonotopeFit {
  Vector lambda;               // in [0,1]^s, basic: at most d entries strictly inside
  double residual_l1 = 0.0;    // || sum lambda_k y_k - target ||_1
  std::size_t iterations = 0;
};

// Minimizes || sum_k lambda_k points[k] - target ||_1 over lambda in [0,1]^s and
// returns a basic optimal solution. `row_scale` (optional, length d) multiplies
// each coordinate before measuring the residual.
ZonotopeFit zonotope_fit(const std::vector<Vector>& points, std::span<const double> target,
                         std::span<const double> row_scale = {});

// Indices with lambda strictly between 0 and 1 (beyond `tol`).
std::vector<std::size_t> fractional_indices(std::span<const double> lambda, double tol = 1e-12);

}  // namespace steinitz
