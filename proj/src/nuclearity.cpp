#include "steinitz/nuclearity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "steinitz/errors.hpp"

namespace steinitz {

namespace {

void check_epsilon(double epsilon, bool allow_one) {
  const bool ok = epsilon > 0.0 && (allow_one ? epsilon <= 1.0 : epsilon < 1.0);
  if (!ok) throw InvalidArgument("epsilon must lie in (0, 1" + std::string(allow_one ? "]" : ")"));
}

VEpsReport profile_from_singular_values(const Vector& sv, double epsilon, std::size_t n_max) {
  VEpsReport r;
  r.epsilon = epsilon;
  for (std::size_t n = 1; n <= n_max; ++n) {
    const double v = volume_number_from_singular_values(sv, n);
    r.volume_numbers.push_back(v);
    r.values.push_back(std::pow(static_cast<double>(n), epsilon) * v);
  }
  r.sup_value = r.values.empty() ? 0.0 : *std::max_element(r.values.begin(), r.values.end());
  r.decay_observed = !r.values.empty() && r.values.back() < 0.5 * r.sup_value;
  return r;
}

std::size_t min_dim(const LinearMap& map) {
  return std::min(map.domain().dim(), map.codomain().dim());
}

}  // namespace

VEpsReport veps_profile(const LinearMap& map, double epsilon, std::size_t n_max) {
  check_epsilon(epsilon, false);
  if (n_max == 0 || n_max > min_dim(map))
    throw InvalidArgument("veps_profile: need 1 <= n_max <= min(dim domain, dim codomain)");
  return profile_from_singular_values(singular_values(map), epsilon, n_max);
}

LinearMap compose_chain(const std::vector<LinearMap>& maps) {
  if (maps.empty()) throw InvalidArgument("compose_chain: no maps");
  LinearMap t = maps.back();
  for (std::size_t i = maps.size() - 1; i-- > 0;) t = compose(maps[i], t);
  return t;
}

ChainCheck composition_chain_check(const std::vector<LinearMap>& maps, double epsilon) {
  check_epsilon(epsilon, true);
  const auto needed = static_cast<std::size_t>(std::ceil(5.0 / epsilon - 1e-12));
  if (maps.size() < needed)
    throw ChainTooShort("composition_chain_check: " + std::to_string(maps.size()) +
                        " factors, need at least " + std::to_string(needed));
  ChainCheck c;
  c.factors = maps.size();
  c.epsilon = epsilon;

  const LinearMap t = compose_chain(maps);
  Vector sv = singular_values(t);
  // Same rank rule as the volume numbers, so a numerically zero delta_n is
  // not compared against v_n = 0.
  for (double& s : sv)
    if (s <= kRankTolerance * sv.front()) s = 0.0;
  const std::size_t n_max = sv.size();

  c.rhs_product = 1.0;
  for (const LinearMap& m : maps) {
    const Vector s = singular_values(m);
    double sup = 0.0;
    for (std::size_t l = 1; l <= s.size(); ++l)
      sup = std::max(sup, std::pow(static_cast<double>(l), epsilon) *
                              volume_number_from_singular_values(s, l));
    c.rhs_product *= sup;
  }
  for (std::size_t l = 1; l <= n_max; ++l)
    c.lhs_sup = std::max(c.lhs_sup, std::pow(static_cast<double>(l), 5.0) *
                                        volume_number_from_singular_values(sv, l));
  c.sup_inequality = c.lhs_sup <= c.rhs_product + c.tolerance * std::max(1.0, c.rhs_product);

  c.chain_inequality = true;
  double log_h = 0.0;
  bool h_zero = false;
  double log_v = 0.0;
  bool v_zero = false;
  double partial = 0.0;
  double peak_term = 0.0;
  for (std::size_t n = 1; n <= n_max; ++n) {
    const double nd = static_cast<double>(n);
    const double delta = sv[n - 1];
    const double v = volume_number_from_singular_values(sv, n);
    if (delta > 0.0) log_h += std::log(delta); else h_zero = true;
    if (v > 0.0) log_v += std::log(v); else v_zero = true;
    const double hb = h_zero ? 0.0 : nd * std::exp(log_h / nd);
    const double vb = v_zero ? 0.0 : nd * std::exp(log_v / nd);
    c.delta.push_back(delta);
    c.hilbert_bound.push_back(hb);
    c.volume_bound.push_back(vb);
    const double slack_h = c.tolerance * std::max(1.0, hb);
    const double slack_v = c.tolerance * std::max(1.0, vb);
    if (delta > hb + slack_h || hb > vb + slack_v) c.chain_inequality = false;
    partial += nd * delta;
    peak_term = std::max(peak_term, nd * delta);
    c.weighted_partial_sums.push_back(partial);
  }
  const double last_term = n_max == 0 ? 0.0 : static_cast<double>(n_max) * sv[n_max - 1];
  c.tail_decays = last_term <= 0.5 * peak_term || last_term == 0.0;
  return c;
}

TwoSummingReport two_summing_composition_profile(const std::vector<LinearMap>& maps,
                                                 double epsilon) {
  check_epsilon(epsilon, false);
  if (maps.size() != 3) throw InvalidArgument("two_summing_composition_profile: needs three maps");
  TwoSummingReport out;
  for (const LinearMap& m : maps) out.factor_hs_norms.push_back(hs_norm(m));
  const LinearMap t = compose_chain(maps);
  const Vector sv = singular_values(t);
  out.profile = profile_from_singular_values(sv, epsilon, sv.size());
  double running = 0.0;
  for (std::size_t n = 1; n <= sv.size(); ++n) {
    running += sv[n - 1];
    const double nd = static_cast<double>(n);
    out.profile.majorant.push_back(std::pow(nd, epsilon) * running / nd);
  }
  return out;
}

std::vector<VEpsReport> scale_criterion_profile(const DiscScale& scale, const WeightedHilbert& p,
                                                double epsilon, std::size_t n_max) {
  check_epsilon(epsilon, false);
  if (p.dim() != scale.truncation_dim)
    throw DimensionMismatch("scale_criterion_profile: seminorm dimension " +
                            std::to_string(p.dim()) + " differs from scale dimension " +
                            std::to_string(scale.truncation_dim));
  std::vector<VEpsReport> out;
  const std::size_t n = std::min(n_max, scale.truncation_dim);
  for (const WeightedHilbert& disc : scale.discs)
    out.push_back(veps_profile(LinearMap::identity(disc, p), epsilon, n));
  return out;
}

void write_profile_csv(std::ostream& out, const VEpsReport& report) {
  out << "n,v_n,n^eps*v_n,majorant\n";
  char buf[128];
  for (std::size_t i = 0; i < report.values.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,", i + 1, report.volume_numbers[i],
                  report.values[i]);
    out << buf;
    if (i < report.majorant.size()) {
      std::snprintf(buf, sizeof buf, "%.17g", report.majorant[i]);
      out << buf;
    }
    out << '\n';
  }
}

}  // namespace steinitz
