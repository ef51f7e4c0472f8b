#include "steinitz/rearranger.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "steinitz/domain.hpp"
#include "steinitz/errors.hpp"
#include "steinitz/kernels.hpp"
#include "steinitz/zonotope.hpp"

namespace steinitz {

namespace {

constexpr double kSlack = 1e-12;

void require_dim(const WeightedHilbert& h, std::size_t d, const char* what) {
  if (h.dim() != d) throw PreconditionViolated(Precondition::shape, what);
}

struct Rounding {
  std::vector<std::size_t> subset;
  double error = std::numeric_limits<double>::infinity();
};

// Rounds the fractional coordinates of lambda every possible way and keeps the
// rounding whose sum is nearest to `target` in `norm`.
template <class Norm>
Rounding round_fractional(const std::vector<Vector>& points, std::span<const double> lambda,
                          std::span<const double> target, Norm norm) {
  const std::size_t d = target.size();
  const std::vector<std::size_t> frac = fractional_indices(lambda, 0.0);
  if (frac.size() > 24) throw BoundMissed("round_off: too many fractional coordinates");
  Vector base(target.begin(), target.end());
  for (double& x : base) x = -x;
  std::vector<std::size_t> ones;
  for (std::size_t k = 0; k < lambda.size(); ++k)
    if (lambda[k] == 1.0) {
      kernels::axpy(1.0, points[k], base);
      ones.push_back(k);
    }
  Rounding best;
  std::size_t best_mask = 0;
  Vector cur(d);
  for (std::size_t mask = 0; mask < (std::size_t{1} << frac.size()); ++mask) {
    cur = base;
    for (std::size_t b = 0; b < frac.size(); ++b)
      if (mask >> b & 1) kernels::axpy(1.0, points[frac[b]], cur);
    const double e = norm(cur);
    if (e < best.error) {
      best.error = e;
      best_mask = mask;
    }
  }
  best.subset = ones;
  for (std::size_t b = 0; b < frac.size(); ++b)
    if (best_mask >> b & 1) best.subset.push_back(frac[b]);
  std::sort(best.subset.begin(), best.subset.end());
  return best;
}

template <class Norm>
Rounding exhaustive_subsets(const std::vector<Vector>& points, std::span<const double> target,
                            Norm norm) {
  const std::size_t s = points.size();
  Vector cur(target.begin(), target.end());
  for (double& x : cur) x = -x;
  Rounding best;
  best.error = norm(cur);
  std::size_t best_mask = 0;
  std::size_t mask = 0;
  // Gray code: one point toggles per step.
  for (std::size_t step = 1; step < (std::size_t{1} << s); ++step) {
    const std::size_t bit = static_cast<std::size_t>(__builtin_ctzll(step));
    mask ^= std::size_t{1} << bit;
    kernels::axpy((mask >> bit & 1) ? 1.0 : -1.0, points[bit], cur);
    const double e = norm(cur);
    if (e < best.error) {
      best.error = e;
      best_mask = mask;
    }
  }
  for (std::size_t k = 0; k < s; ++k)
    if (best_mask >> k & 1) best.subset.push_back(k);
  return best;
}

}  // namespace

RoundOffResult round_off(const RoundOffInstance& inst, RoundOffOptions options) {
  const std::size_t d = inst.target.size();
  require_dim(inst.h1, d, "round_off: H1 dimension");
  require_dim(inst.h2, d, "round_off: H2 dimension");
  for (const Vector& y : inst.points)
    if (y.size() != d) throw PreconditionViolated(Precondition::shape, "round_off: point dimension");

  if (!options.force) {
    for (std::size_t k = 0; k < inst.points.size(); ++k)
      if (inst.h1.norm(inst.points[k]) > 1.0 + kSlack)
        throw PreconditionViolated(Precondition::ball,
                                   "round_off: point " + std::to_string(k + 1) + " outside B_H1");
    if (hs_norm(LinearMap::identity(inst.h1, inst.h2)) > 1.0 + kSlack)
      throw PreconditionViolated(Precondition::hs, "round_off: HS(H1 -> H2) > 1");
  }
  const auto h2norm = [&](const Vector& v) { return inst.h2.norm(v); };

  RoundOffResult out;
  if (inst.points.empty()) {
    if (!options.force && norm2(inst.target) > 1e-9)
      throw PreconditionViolated(Precondition::zonotope, "round_off: target outside the zonotope");
    out.error = h2norm(inst.target);
  } else {
    const ZonotopeFit fit = zonotope_fit(inst.points, inst.target);
    if (!options.force && fit.residual_l1 > 1e-9)
      throw PreconditionViolated(Precondition::zonotope,
                                 "round_off: target outside the zonotope (l1 gap " +
                                     std::to_string(fit.residual_l1) + ")");
    out.fractional = fractional_indices(fit.lambda, 0.0).size();
    Rounding r = round_fractional(inst.points, fit.lambda, inst.target, h2norm);
    if (r.error > 1.0 && inst.points.size() <= 20) {
      r = exhaustive_subsets(inst.points, inst.target, h2norm);
      out.exhaustive = true;
    }
    out.subset = std::move(r.subset);
    out.error = r.error;
  }
  if (out.error > 1.0)
    throw BoundMissed("round_off: best subset misses the H2 bound (" + std::to_string(out.error) +
                      ")");
  return out;
}

double max_prefix_norm(const PermInstance& inst, std::span<const std::size_t> order) {
  Vector cur = inst.anchor;
  double worst = 0.0;
  for (std::size_t k : order) {
    kernels::axpy(1.0, inst.vectors.at(k), cur);
    worst = std::max(worst, inst.h3.norm(cur));
  }
  return worst;
}

namespace {

class PrefixSearch {
 public:
  PrefixSearch(const PermInstance& inst, std::size_t budget) : inst_(inst), budget_(budget) {}

  bool greedy(std::vector<std::size_t>& order) {
    const std::size_t s = inst_.vectors.size();
    std::vector<char> used(s, 0);
    Vector cur = inst_.anchor;
    Vector trial;
    order.clear();
    for (std::size_t depth = 0; depth < s; ++depth) {
      std::size_t pick = s;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < s; ++k) {
        if (used[k]) continue;
        trial = cur;
        kernels::axpy(1.0, inst_.vectors[k], trial);
        const double n = std::sqrt(kernels::weighted_sq_norm(inst_.h3.weights(), trial));
        if (n < best) {
          best = n;
          pick = k;
        }
      }
      if (best > 1.0 + kSlack) return false;
      used[pick] = 1;
      kernels::axpy(1.0, inst_.vectors[pick], cur);
      order.push_back(pick);
    }
    return true;
  }

  bool backtrack(std::vector<std::size_t>& order) {
    const std::size_t s = inst_.vectors.size();
    std::vector<char> used(s, 0);
    order.clear();
    Vector cur = inst_.anchor;
    return dfs(used, cur, order);
  }

  bool budget_exhausted() const { return exhausted_; }

 private:
  std::string key(const std::vector<char>& used) const { return std::string(used.begin(), used.end()); }

  bool dfs(std::vector<char>& used, Vector& cur, std::vector<std::size_t>& order) {
    const std::size_t s = inst_.vectors.size();
    if (order.size() == s) return true;
    if (budget_ != 0 && ++nodes_ > budget_) {
      exhausted_ = true;
      return false;
    }
    if (failed_.count(key(used))) return false;
    std::vector<std::pair<double, std::size_t>> cand;
    Vector next;
    for (std::size_t k = 0; k < s; ++k) {
      if (used[k]) continue;
      next = cur;
      kernels::axpy(1.0, inst_.vectors[k], next);
      const double n = inst_.h3.norm(next);
      if (n <= 1.0 + kSlack) cand.emplace_back(n, k);
    }
    std::sort(cand.begin(), cand.end());
    for (const auto& [n, k] : cand) {
      used[k] = 1;
      kernels::axpy(1.0, inst_.vectors[k], cur);
      order.push_back(k);
      if (dfs(used, cur, order)) return true;
      order.pop_back();
      kernels::axpy(-1.0, inst_.vectors[k], cur);
      used[k] = 0;
      if (exhausted_) return false;
    }
    failed_.insert(key(used));
    return false;
  }

  const PermInstance& inst_;
  std::size_t budget_;
  std::size_t nodes_ = 0;
  bool exhausted_ = false;
  std::unordered_set<std::string> failed_;
};

}  // namespace

std::vector<std::size_t> permute_bounded(const PermInstance& inst, PermOptions options) {
  const std::size_t d = inst.anchor.size();
  require_dim(inst.h1, d, "permute_bounded: H1 dimension");
  require_dim(inst.h2, d, "permute_bounded: H2 dimension");
  require_dim(inst.h3, d, "permute_bounded: H3 dimension");
  for (const Vector& v : inst.vectors)
    if (v.size() != d) throw PreconditionViolated(Precondition::shape, "permute_bounded: vector dimension");

  if (!options.force) {
    for (std::size_t i = 0; i < d; ++i)
      if (inst.h2.weights()[i] > inst.h1.weights()[i] || inst.h3.weights()[i] > inst.h2.weights()[i])
        throw PreconditionViolated(Precondition::shape,
                                   "permute_bounded: spaces must be nested (weights nonincreasing)");
    Vector total = inst.anchor;
    for (std::size_t k = 0; k < inst.vectors.size(); ++k) {
      if (inst.h1.norm(inst.vectors[k]) > 1.0 + kSlack)
        throw PreconditionViolated(Precondition::ball, "permute_bounded: vector " +
                                                           std::to_string(k + 1) + " outside B_H1");
      kernels::axpy(1.0, inst.vectors[k], total);
    }
    if (inst.h2.norm(inst.anchor) > 1.0 + kSlack)
      throw PreconditionViolated(Precondition::ball, "permute_bounded: anchor outside B_H2");
    if (inst.h2.norm(total) > 1.0 + kSlack)
      throw PreconditionViolated(Precondition::ball, "permute_bounded: full sum outside B_H2");
    if (hs_norm(LinearMap::identity(inst.h1, inst.h2)) > 1.0 + kSlack)
      throw PreconditionViolated(Precondition::hs, "permute_bounded: HS(H1 -> H2) > 1");
    if (hs_norm(LinearMap::identity(inst.h2, inst.h3)) > 0.5 + kSlack)
      throw PreconditionViolated(Precondition::hs, "permute_bounded: HS(H2 -> H3) > 1/2");
  }

  const std::size_t s = inst.vectors.size();
  PrefixSearch search(inst, s <= 10 ? 0 : options.node_budget);
  std::vector<std::size_t> order;
  if (search.greedy(order)) return order;
  if (search.backtrack(order)) return order;
  throw SearchExhausted(search.budget_exhausted()
                            ? "permute_bounded: node budget exhausted"
                            : "permute_bounded: no order keeps every prefix in B_H3");
}

std::size_t stage_deadline(std::size_t stage, std::size_t stage_width) {
  const std::size_t shift = std::min<std::size_t>(stage - 1, 40);
  return std::max(stage * stage_width, stage_width << shift);
}

TargetRearranger::TargetRearranger(SeriesSpec spec, Vector target, DiscScale scale,
                                   RearrangeOptions options)
    : spec_(std::move(spec)),
      target_(std::move(target)),
      scale_(std::move(scale)),
      options_(options) {
  spec_.validate();
  if (target_.size() != spec_.dimension) throw DimensionMismatch("rearrange: target dimension");
  if (scale_.truncation_dim != spec_.dimension)
    throw DimensionMismatch("rearrange: scale dimension differs from series dimension");
  if (scale_.levels() < 3) throw InvalidArgument("rearrange: scale needs at least 3 discs");
  if (options_.stage_width == 0) throw InvalidArgument("rearrange: stage width must be >= 1");
  validate_scale(scale_);
  const Membership m = membership(spec_, target_, 1e-8);
  if (!m.in_domain)
    throw NotInDomain("target is not in the domain of sums (distance " +
                          std::to_string(m.distance) + ")",
                      m.separating_functional);
  prefix_.assign(spec_.dimension, 0.0);
}

void TargetRearranger::next_stage() {
  const std::size_t l = stage_;
  const double sigma = 2.0 * static_cast<double>(l + 1);
  const WeightedHilbert& b0 = scale_.disc(1);
  const WeightedHilbert& b = scale_.disc(2);
  const WeightedHilbert& c = scale_.disc(3);

  // Past D every term is in (1/sigma) B0.
  std::size_t big_d = std::max(stage_deadline(l, options_.stage_width), frontier_);
  const auto tail_b0 = [&](std::size_t n) {
    double bound = 0.0;
    for (const Component& comp : spec_.components)
      bound += sup_abs_after(comp.stream, n) * b0.norm(comp.direction);
    return bound;
  };
  while (tail_b0(big_d) > 1.0 / sigma) {
    if (big_d > options_.window_cap) throw StageFailure(l, "terms never enter (1/sigma) B0");
    big_d *= 2;
  }
  if (emitted_.size() <= big_d) emitted_.resize(big_d + 1, 0);

  std::vector<std::size_t> block;
  Vector rest = subtract(target_, prefix_);
  for (std::size_t k = 1; k <= big_d; ++k) {
    if (emitted_[k]) continue;
    block.push_back(k);
    kernels::axpy(-1.0, term(spec_, k), rest);
  }

  // Widen the window until its zonotope nearly contains the remaining gap.
  Vector root_b(b.dim());
  for (std::size_t i = 0; i < b.dim(); ++i) root_b[i] = std::sqrt(b.weights()[i]);
  std::size_t w = 2 * big_d + options_.stage_width;
  std::vector<std::size_t> window;
  std::vector<Vector> points;
  ZonotopeFit fit;
  while (true) {
    window.clear();
    points.clear();
    for (std::size_t k = big_d + 1; k <= w; ++k) {
      if (k < emitted_.size() && emitted_[k]) continue;
      window.push_back(k);
      points.push_back(term(spec_, k));
    }
    fit = zonotope_fit(points, rest, root_b);
    if (fit.residual_l1 <= 1.0 / sigma) break;
    if (w > options_.window_cap)
      throw StageFailure(l, "window reached " + std::to_string(w) +
                                " terms without covering the target (residual " +
                                std::to_string(fit.residual_l1) + ")");
    w *= 2;
  }
  const auto bnorm = [&](const Vector& v) { return b.norm(v); };
  const Rounding r = round_fractional(points, fit.lambda, rest, bnorm);
  if (r.error > 2.0 / sigma)
    throw StageFailure(l, "rounding error " + std::to_string(r.error) + " exceeds " +
                              std::to_string(2.0 / sigma));
  for (std::size_t i : r.subset) block.push_back(window[i]);

  // Order the block so intermediate prefixes stay in (1/l) C.
  std::vector<std::size_t> order(block.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  if (!stream_.emitted.empty() && !block.empty()) {
    PermInstance inst{{}, subtract(prefix_, target_), b0.rescaled(static_cast<double>(l)),
                      b.rescaled(static_cast<double>(l)), c.rescaled(static_cast<double>(l))};
    for (std::size_t k : block) inst.vectors.push_back(term(spec_, k));
    try {
      order = permute_bounded(inst);
    } catch (const Error& e) {
      throw StageFailure(l, std::string("ordering failed: ") + e.what());
    }
  }
  for (std::size_t i : order) {
    const std::size_t k = block[i];
    if (emitted_.size() <= k) emitted_.resize(k + 1, 0);
    emitted_[k] = 1;
    stream_.emitted.push_back(k);
    const Vector u = term(spec_, k);
    for (std::size_t j = 0; j < prefix_.size(); ++j) prefix_[j] += u[j];
  }
  const double bound = 1.0 / static_cast<double>(l);
  const double err = b.distance(prefix_, target_);
  if (err > bound)
    throw StageFailure(l, "checkpoint error " + std::to_string(err) + " exceeds " +
                              std::to_string(bound));
  stream_.certificates.push_back({l, stream_.emitted.size(), bound, 2});
  frontier_ = big_d;
  ++stage_;
}

PermutationStream rearrange_to_target(const SeriesSpec& spec, std::span<const double> target,
                                      const DiscScale& scale, std::size_t stages,
                                      RearrangeOptions options) {
  TargetRearranger r(spec, Vector(target.begin(), target.end()), scale, options);
  for (std::size_t i = 0; i < stages; ++i) r.next_stage();
  return r.stream();
}

PermutationStream riemann_rearrange(const ScalarStream& stream, double target, std::size_t count) {
  stream.validate();
  if (classify_stream(stream) != Convergence::conditional)
    throw NotConditional("riemann_rearrange: stream is not conditionally convergent");
  PermutationStream out;
  std::size_t next_pos = 1;
  std::size_t next_neg = 1;
  const auto advance = [&](std::size_t& k, bool positive) {
    while ((stream.value(k) > 0.0) != positive) ++k;
  };
  advance(next_pos, true);
  advance(next_neg, false);
  double s = 0.0;
  std::size_t crossings = 0;
  for (std::size_t n = 1; n <= count; ++n) {
    bool up;
    if (s < target)
      up = true;
    else if (s > target)
      up = false;
    else
      up = next_pos < next_neg;
    std::size_t& k = up ? next_pos : next_neg;
    const double v = stream.value(k);
    out.emitted.push_back(k);
    ++k;
    advance(k, up);
    s += v;
    if (up ? s >= target : s <= target) {
      const double ulp_room = 4.0 * std::numeric_limits<double>::epsilon() *
                              std::max(std::abs(s), std::abs(target));
      out.certificates.push_back({++crossings, n, std::abs(v) + ulp_room, 0});
    }
  }
  return out;
}

double certificate_norm(std::span<const double> v, std::size_t disc, const DiscScale* scale) {
  if (disc == 0) return norm2(v);
  if (scale == nullptr) throw InvalidArgument("certificate refers to a disc but no scale given");
  return scale->disc(disc).norm(v);
}

StreamCheck verify_stream(const SeriesSpec& spec, std::span<const double> target,
                          const DiscScale* scale, const PermutationStream& stream) {
  StreamCheck check;
  const auto fail = [&](std::string why) {
    if (check.ok) check.failure = std::move(why);
    check.ok = false;
  };
  std::unordered_set<std::size_t> seen;
  for (std::size_t k : stream.emitted) {
    if (k == 0) fail("index 0 emitted");
    if (!seen.insert(k).second) fail("index " + std::to_string(k) + " emitted twice");
  }
  Vector s(spec.dimension, 0.0);
  std::size_t n = 0;
  std::size_t last = 0;
  for (const StageCertificate& c : stream.certificates) {
    if (c.prefix_length < last || c.prefix_length > stream.emitted.size()) {
      fail("certificate prefix length " + std::to_string(c.prefix_length) + " out of order");
      check.worst_errors.push_back(std::numeric_limits<double>::infinity());
      continue;
    }
    last = c.prefix_length;
    for (; n < c.prefix_length; ++n) {
      const Vector u = term(spec, stream.emitted[n]);
      for (std::size_t j = 0; j < s.size(); ++j) s[j] += u[j];
    }
    const double err = certificate_norm(subtract(s, target), c.disc, scale);
    check.worst_errors.push_back(err);
    if (!(err <= c.bound * (1.0 + 1e-12) + 1e-15))
      fail("stage " + std::to_string(c.stage) + ": error " + std::to_string(err) +
           " exceeds bound " + std::to_string(c.bound));
  }
  return check;
}

void write_stream(std::ostream& out, const PermutationStream& stream,
                  const std::vector<std::string>& header) {
  for (const std::string& h : header) out << "# " << h << '\n';
  std::size_t c = 0;
  char buf[64];
  for (std::size_t n = 0; n <= stream.emitted.size(); ++n) {
    while (c < stream.certificates.size() && stream.certificates[c].prefix_length == n) {
      const StageCertificate& cert = stream.certificates[c++];
      std::snprintf(buf, sizeof buf, "%.17g", cert.bound);
      out << "# stage " << cert.stage << ' ' << cert.prefix_length << ' ' << buf << ' '
          << cert.disc << '\n';
    }
    if (n < stream.emitted.size()) out << stream.emitted[n] << '\n';
  }
}

PermutationStream read_stream(std::istream& in) {
  PermutationStream s;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ls(line.substr(1));
      std::string word;
      ls >> word;
      if (word != "stage") continue;
      StageCertificate c;
      if (!(ls >> c.stage >> c.prefix_length >> c.bound >> c.disc))
        throw ParseError("stream line " + std::to_string(lineno) + ": malformed certificate");
      s.certificates.push_back(c);
      continue;
    }
    std::size_t pos = 0;
    unsigned long long k = 0;
    try {
      k = std::stoull(line, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != line.size() || line[0] == '-')
      throw ParseError("stream line " + std::to_string(lineno) + ": expected an index");
    s.emitted.push_back(static_cast<std::size_t>(k));
  }
  return s;
}

}  // namespace steinitz
