#pragma once
// Profiles n -> n^eps v_n(T) and numeric checks of the composition
// inequalities for volume numbers.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "steinitz/hilbert.hpp"
#include "steinitz/koethe.hpp"

namespace steinitz {

inline constexpr const char* kFiniteRangeDisclaimer =
    "finite-range evidence: every finite-rank map has bounded profile; values describe decay, "
    "not membership";

struct VEpsReport {
  double epsilon = 0.0;
  Vector volume_numbers;  // v_n, n = 1..n_max
  Vector values;          // n^eps v_n
  Vector majorant;        // optional comparison sequence, empty when absent
  double sup_value = 0.0;
  bool decay_observed = false;  // last value below half of the peak
  std::string disclaimer = kFiniteRangeDisclaimer;
};

VEpsReport veps_profile(const LinearMap& map, double epsilon, std::size_t n_max);

struct ChainCheck {
  std::size_t factors = 0;
  double epsilon = 0.0;
  // sup_l l^5 v_l(T) against prod_i sup_l l^eps v_l(T_i).
  double lhs_sup = 0.0;
  double rhs_product = 0.0;
  bool sup_inequality = false;
  // delta_n(T) <= n (prod_{l<=n} h_l)^{1/n} <= (prod_{l<=n} n v_l(T))^{1/n}, per n.
  Vector delta;
  Vector hilbert_bound;
  Vector volume_bound;
  bool chain_inequality = false;
  // Partial sums of n * delta_n(T).
  Vector weighted_partial_sums;
  bool tail_decays = false;
  double tolerance = 1e-9;
  std::string disclaimer = kFiniteRangeDisclaimer;
};

// maps are applied right to left: T = maps[0] o maps[1] o ... o maps[k-1].
// Throws ChainTooShort when k < ceil(5 / epsilon).
ChainCheck composition_chain_check(const std::vector<LinearMap>& maps, double epsilon);

LinearMap compose_chain(const std::vector<LinearMap>& maps);

// Profile of the composition together with n^eps (1/n) sum_{i<=n} delta_i(T),
// and the HS norms of the factors (their 2-summing norms).
struct TwoSummingReport {
  VEpsReport profile;
  Vector factor_hs_norms;
};
TwoSummingReport two_summing_composition_profile(const std::vector<LinearMap>& maps, double epsilon);

// One profile per disc: the identity E_{B_n} -> E_p.
std::vector<VEpsReport> scale_criterion_profile(const DiscScale& scale, const WeightedHilbert& p,
                                                double epsilon, std::size_t n_max);

// CSV with columns n, v_n, n^eps*v_n, majorant.
void write_profile_csv(std::ostream& out, const VEpsReport& report);

}  // namespace steinitz
