#pragma once
// Koethe matrices a_n(i), the l1-ratio nuclearity test, and truncated chains
// of Hilbert discs with Hilbert-Schmidt links <= 1/2.

#include <cstddef>
#include <string>
#include <vector>

#include "steinitz/hilbert.hpp"

namespace steinitz {

enum class GridFamily { power, constant, geometric, table };

std::string to_string(GridFamily f);

// n and i both start at 1.
//   power:     a_n(i) = i^n
//   constant:  a_n(i) = c
//   geometric: a_n(i) = r_n^i with r_n = rates[n-1], or 1 - 2^-n when rates is empty
//   table:     a_n(i) = rows[n-1][i-1]
struct KoetheMatrix {
  GridFamily family = GridFamily::power;
  double constant = 1.0;
  Vector rates;
  std::vector<Vector> rows;

  static KoetheMatrix power();
  static KoetheMatrix constant_grid(double c);
  static KoetheMatrix geometric(Vector rates = {});
  static KoetheMatrix tabulated(std::vector<Vector> rows);

  double a(std::size_t n, std::size_t i) const;
  // Largest n with defined entries (unbounded families report SIZE_MAX).
  std::size_t levels() const;
  std::size_t width() const;

  // Checks 0 < a_n(i) <= a_{n+1}(i) on the grid n <= n_max, i <= i_max
  // (clipped to the table); throws InvalidArgument on failure.
  void validate(std::size_t n_max = 8, std::size_t i_max = 10000) const;
};

struct NuclearityVerdict {
  bool nuclear = false;
  std::vector<std::size_t> witness;  // witness[n-1] = least m with (a_n/a_m) in l1
  Vector ratio_sums;                 // certified sum_i a_n(i)/a_m(i) at the witness
  std::size_t n_max = 0;
  std::size_t m_max = 0;
  std::size_t failing_n = 0;  // first n without a witness when not nuclear
};

// Certified decision per family; throws UndecidableFamily for tables.
NuclearityVerdict nuclearity_test(const KoetheMatrix& a, std::size_t n_max, std::size_t m_max,
                                  double tail_tol);

// sup_i |u(i)| / a_n(i) over u = (u(1), u(2), ...).
double dual_norm(std::span<const double> u, const KoetheMatrix& a, std::size_t n);

struct DiscScale {
  std::size_t truncation_dim = 0;
  std::vector<WeightedHilbert> discs;  // disc n is the unit ball of discs[n-1]
  Vector rescale_factors;              // factor applied at each level, first is 1
  Vector raw_links;                    // HS of consecutive raw discs before rescaling

  std::size_t levels() const { return discs.size(); }
  const WeightedHilbert& disc(std::size_t n) const;
};

// disc_n has weights 1 / (R_n a_n(i))^2, i <= dim, with R_1 = 1 and
// R_{n+1} = R_n * max(1, 2 * raw link n).
DiscScale build_hs_scale(const KoetheMatrix& a, std::size_t dim, std::size_t levels);

// HS norm of the identity disc_n -> disc_{n+1}.
double hs_link(const DiscScale& scale, std::size_t n);
// HS norm of the identity disc_n -> disc_m, n <= m.
double hs_embedding(const DiscScale& scale, std::size_t n, std::size_t m);

// Throws InvalidArgument unless the discs are nested and every link is <= 1/2.
void validate_scale(const DiscScale& scale, double slack = 1e-12);

}  // namespace steinitz
