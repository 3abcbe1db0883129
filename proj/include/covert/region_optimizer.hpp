#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "covert/channel_model.hpp"
#include "covert/covert_rates.hpp"
#include "covert/error.hpp"
#include "covert/parallel.hpp"
#include "covert/simplex_search.hpp"

namespace covert {

struct OptimizerConfig {
  std::size_t restarts = 32;      // random starts per |B|
  std::size_t weight_grid = 12;   // log-spaced scalarization weights on the boundary
  std::size_t local_iters = 3000; // objective evaluations per local search
  std::uint64_t seed = 1;
  double tol = 1e-10;
  std::size_t threads = 0;        // 0: COVERT_THREADS / hardware

  void validate() const {
    if (restarts < 1) throw ModelError(ModelError::Kind::Range, "restarts must be >= 1");
    if (!(tol > 0.0)) throw ModelError(ModelError::Kind::Range, "tol must be > 0");
  }

  std::size_t workers() const { return threads > 0 ? threads : thread_count(); }

  nlohmann::json to_json() const {
    return {{"restarts", restarts}, {"weight_grid", weight_grid}, {"local_iters", local_iters},
            {"seed", seed},         {"tol", tol}};
  }
};

/// Free-coordinate encoding of SuperpositionParams for a fixed |B|:
/// logistic for nu and softmax (last logit 0) for every pmf.
class ParamCodec {
 public:
  ParamCodec(std::size_t inputs, std::size_t x0, std::size_t b_size)
      : nx_(inputs), x0_(x0), nb_(b_size) {
    for (std::size_t x = 0; x < nx_; ++x)
      if (x != x0_) active_.push_back(x);
  }

  std::size_t b_size() const noexcept { return nb_; }
  std::size_t dimension() const noexcept {
    return 1 + (nx_ - 2) + (nb_ - 1) + nb_ * (nx_ - 1);
  }

  struct Raw {
    double nu = 0.0;
    std::vector<double> ptilde, pu, pxu;
  };

  void decode(std::span<const double> theta, Raw& raw) const {
    raw.ptilde.assign(nx_, 0.0);
    raw.pu.resize(nb_);
    raw.pxu.resize(nb_ * nx_);
    std::size_t at = 0;
    raw.nu = search::logistic(theta[at++]);
    sub_.resize(active_.size());
    search::softmax_into(theta.subspan(at, active_.size() - 1), sub_);
    at += active_.size() - 1;
    for (std::size_t i = 0; i < active_.size(); ++i) raw.ptilde[active_[i]] = sub_[i];
    search::softmax_into(theta.subspan(at, nb_ - 1), raw.pu);
    at += nb_ - 1;
    for (std::size_t u = 0; u < nb_; ++u) {
      search::softmax_into(theta.subspan(at, nx_ - 1), std::span<double>(raw.pxu).subspan(u * nx_, nx_));
      at += nx_ - 1;
    }
  }

  std::vector<double> encode(double nu, std::span<const double> ptilde, std::span<const double> pu,
                             std::span<const double> pxu) const {
    std::vector<double> theta(dimension());
    std::size_t at = 0;
    theta[at++] = search::logit(nu);
    sub_.resize(active_.size());
    for (std::size_t i = 0; i < active_.size(); ++i) sub_[i] = ptilde[active_[i]];
    search::logits_from_pmf(sub_, std::span<double>(theta).subspan(at, active_.size() - 1));
    at += active_.size() - 1;
    search::logits_from_pmf(pu, std::span<double>(theta).subspan(at, nb_ - 1));
    at += nb_ - 1;
    for (std::size_t u = 0; u < nb_; ++u) {
      search::logits_from_pmf(pxu.subspan(u * nx_, nx_), std::span<double>(theta).subspan(at, nx_ - 1));
      at += nx_ - 1;
    }
    return theta;
  }

  std::vector<double> encode(const SuperpositionParams& p) const {
    return encode(p.nu, p.ptilde_x_a.probs(), p.pu_b.probs(), RateEvaluator::flat(p.px_given_u_b));
  }

  SuperpositionParams to_params(const Raw& raw) const {
    std::vector<std::vector<double>> rows(nb_);
    for (std::size_t u = 0; u < nb_; ++u)
      rows[u].assign(raw.pxu.begin() + static_cast<std::ptrdiff_t>(u * nx_),
                     raw.pxu.begin() + static_cast<std::ptrdiff_t>((u + 1) * nx_));
    return {raw.nu, Distribution(raw.ptilde), Distribution(raw.pu), Channel(rows)};
  }

 private:
  std::size_t nx_, x0_, nb_;
  std::vector<std::size_t> active_;
  mutable std::vector<double> sub_;
};

/// What the search maximizes over the region.
struct Scalarization {
  enum class Kind { Weighted, L2Only, Normalized, EpsConstraint };
  Kind kind = Kind::Weighted;
  double weight = 0.0;   // Weighted: L1 + weight * L2
  double l1_star = 1.0;  // Normalized: L1/L1* + L2/L2*
  double l2_star = 1.0;
  double target = 0.0;   // EpsConstraint: L2 - penalty * max(0, target - L1)^2
  double penalty = 0.0;

  double score(const RatePair& r) const {
    switch (kind) {
      case Kind::Weighted: return r.l1 + weight * r.l2;
      case Kind::L2Only: return r.l2;
      case Kind::Normalized: return r.l1 / l1_star + r.l2 / l2_star;
      case Kind::EpsConstraint: {
        const double gap = std::max(0.0, target - r.l1);
        return r.l2 - penalty * gap * gap;
      }
    }
    return 0.0;
  }

  static Scalarization weighted(double w) {
    if (std::isinf(w)) return {Kind::L2Only};
    return {Kind::Weighted, w};
  }
  static Scalarization normalized(double l1s, double l2s) {
    return {Kind::Normalized, 0.0, l1s, l2s};
  }
  static Scalarization eps_constraint(double target, double penalty) {
    return {Kind::EpsConstraint, 0.0, 1.0, 1.0, target, penalty};
  }
};

struct Candidate {
  RatePair rates;
  SuperpositionParams params;
  double score = -std::numeric_limits<double>::infinity();
  std::size_t b_size = 0;
  std::vector<double> theta;  // empty for exactly-specified candidates
};

/// Single-user optima, shared by every search on one model.
struct RegionContext {
  BcWardenModel model;
  SingleUserCapacity user1;
  SingleUserCapacity user2;

  explicit RegionContext(BcWardenModel m)
      : model(std::move(m)),
        user1(single_user_capacity(model.p1(), model.q(), model.x0())),
        user2(single_user_capacity(model.p2(), model.q(), model.x0())) {}

  /// Exact parameter sets attaining (L1*, 0) and (0, L2*).
  std::vector<SuperpositionParams> endpoint_params() const {
    std::vector<SuperpositionParams> out;
    if (!user1.zero) out.push_back(user1_only_params(model, user1.argmax));
    if (!user2.zero) out.push_back(user2_only_params(model, user2.argmax));
    return out;
  }
};

struct SearchStart {
  std::size_t b_size;
  std::vector<double> theta;
};

struct SearchOutcome {
  std::vector<Candidate> ranked;  // non-degenerate candidates, best first
  std::size_t evaluations = 0;

  bool empty() const noexcept { return ranked.empty(); }
  const Candidate& best() const { return ranked.front(); }
};

namespace detail {

inline std::vector<double> uniform_over_active(std::size_t nx, std::size_t x0) {
  std::vector<double> p(nx, 1.0 / static_cast<double>(nx - 1));
  p[x0] = 0.0;
  return p;
}

// Structured and random starting points for one |B|.
inline std::vector<SearchStart> starts_for(const RegionContext& ctx, std::size_t nb,
                                           const OptimizerConfig& config) {
  const BcWardenModel& model = ctx.model;
  const std::size_t nx = model.inputs();
  const ParamCodec codec(nx, model.x0(), nb);
  std::vector<SearchStart> starts;

  const std::vector<double> ptilde =
      ctx.user1.zero ? uniform_over_active(nx, model.x0()) : ctx.user1.argmax.vector();
  const std::vector<double> pu(nb, 1.0 / static_cast<double>(nb));

  // Every deterministic U -> X map (sampled when there are too many).
  std::size_t maps = 1;
  for (std::size_t i = 0; i < nb && maps <= 4096; ++i) maps *= nx;
  constexpr std::size_t kMaxMaps = 64;
  std::vector<std::size_t> chosen;
  if (maps <= kMaxMaps) {
    for (std::size_t m = 0; m < maps; ++m) chosen.push_back(m);
  } else {
    std::seed_seq seq{config.seed, std::uint64_t{0x6d6170}, std::uint64_t{nb}};
    std::mt19937_64 rng(seq);
    std::uniform_int_distribution<std::size_t> pick(0, maps - 1);
    for (std::size_t i = 0; i < kMaxMaps; ++i) chosen.push_back(pick(rng));
  }
  std::vector<double> pxu(nb * nx);
  for (std::size_t m : chosen) {
    std::fill(pxu.begin(), pxu.end(), 0.0);
    std::size_t code = m;
    for (std::size_t u = 0; u < nb; ++u) {
      pxu[u * nx + code % nx] = 1.0;
      code /= nx;
    }
    starts.push_back({nb, codec.encode(0.5, ptilde, pu, pxu)});
  }

  std::fill(pxu.begin(), pxu.end(), 1.0 / static_cast<double>(nx));
  starts.push_back({nb, codec.encode(0.5, uniform_over_active(nx, model.x0()), pu, pxu)});

  for (const auto& p : ctx.endpoint_params())
    if (p.pu_b.size() == nb) starts.push_back({nb, codec.encode(p)});

  for (std::size_t r = 0; r < config.restarts; ++r) {
    std::seed_seq seq{config.seed, std::uint64_t{nb}, std::uint64_t{r}};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal(0.0, 2.0);
    std::vector<double> theta(codec.dimension());
    for (double& t : theta) t = normal(rng);
    starts.push_back({nb, std::move(theta)});
  }
  return starts;
}

inline Candidate exact_candidate(const RateEvaluator& ev, const SuperpositionParams& p,
                                 const Scalarization& scal) {
  Candidate c;
  const auto e = ev.evaluate(p.nu, p.ptilde_x_a.probs(), p.pu_b.probs(),
                             RateEvaluator::flat(p.px_given_u_b));
  if (e.degenerate) return c;
  c.rates = e.rates;
  c.params = p;
  c.score = scal.score(e.rates);
  c.b_size = p.pu_b.size();
  return c;
}

// Local search from one start; returns a candidate with exactly re-evaluated rates.
inline std::pair<Candidate, std::size_t> local_search(const RegionContext& ctx, const SearchStart& start,
                                                      const Scalarization& scal,
                                                      const OptimizerConfig& config) {
  const RateEvaluator ev(ctx.model);
  const ParamCodec codec(ctx.model.inputs(), ctx.model.x0(), start.b_size);
  ParamCodec::Raw raw;
  auto objective = [&](std::span<const double> theta) {
    codec.decode(theta, raw);
    const auto e = ev.evaluate(raw.nu, raw.ptilde, raw.pu, raw.pxu);
    if (e.degenerate) return std::numeric_limits<double>::infinity();
    return -scal.score(e.rates);
  };
  search::NelderMeadOptions opt;
  opt.max_evaluations = config.local_iters;
  opt.x_tolerance = config.tol;
  opt.initial_step = 1.0;
  const auto res = search::nelder_mead(objective, start.theta, opt);

  codec.decode(res.x, raw);
  Candidate c = exact_candidate(ev, codec.to_params(raw), scal);
  c.theta = res.x;
  c.b_size = start.b_size;
  return {std::move(c), res.evaluations};
}

inline void rank(std::vector<Candidate>& cands) {
  std::erase_if(cands, [](const Candidate& c) { return !std::isfinite(c.score); });
  // Equal scores fall back to the parameter vector so the merge is order-independent.
  std::stable_sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.b_size != b.b_size) return a.b_size < b.b_size;
    return a.theta < b.theta;
  });
}

}  // namespace detail

/// Multi-start local search of the scalarized region over |B| = 1..|X|.
inline SearchOutcome search_region(const RegionContext& ctx, const Scalarization& scal,
                                   const OptimizerConfig& config,
                                   const std::vector<SearchStart>& extra_starts = {}) {
  config.validate();
  std::vector<SearchStart> starts;
  for (std::size_t nb = 1; nb <= ctx.model.inputs(); ++nb) {
    auto s = detail::starts_for(ctx, nb, config);
    starts.insert(starts.end(), std::make_move_iterator(s.begin()), std::make_move_iterator(s.end()));
  }
  starts.insert(starts.end(), extra_starts.begin(), extra_starts.end());

  auto results = parallel_map(
      starts.size(),
      [&](std::size_t i) { return detail::local_search(ctx, starts[i], scal, config); },
      config.workers());

  SearchOutcome out;
  const RateEvaluator ev(ctx.model);
  for (const auto& p : ctx.endpoint_params())
    out.ranked.push_back(detail::exact_candidate(ev, p, scal));
  for (auto& [cand, evals] : results) {
    out.evaluations += evals;
    out.ranked.push_back(std::move(cand));
  }
  detail::rank(out.ranked);
  return out;
}

struct WeightedResult {
  RatePair rates;
  std::optional<SuperpositionParams> params;  // empty when every start degenerated
};

/// Maximizes L1 + weight * L2; weight = +inf maximizes L2 alone.
inline WeightedResult maximize_weighted(const RegionContext& ctx, double weight,
                                        const OptimizerConfig& config) {
  const auto outcome = search_region(ctx, Scalarization::weighted(weight), config);
  if (outcome.empty()) return {};
  return {outcome.best().rates, outcome.best().params};
}

inline WeightedResult maximize_weighted(const BcWardenModel& model, double weight,
                                        const OptimizerConfig& config) {
  return maximize_weighted(RegionContext(model), weight, config);
}

/// L1 targets are met when L1 >= target - kTargetSlack.
inline constexpr double kTargetSlack = 1e-9;

struct EpsConstraintResult {
  bool feasible = false;
  Candidate best;
};

/// max L2 subject to L1 >= target via a quadratic penalty with continuation.
inline EpsConstraintResult max_l2_given_l1(const RegionContext& ctx, double target,
                                           const OptimizerConfig& config,
                                           const std::vector<SearchStart>& extra_starts = {}) {
  EpsConstraintResult out;
  const RateEvaluator ev(ctx.model);
  if (target <= 0.0) {
    if (!ctx.user2.zero) {
      out.best = detail::exact_candidate(ev, user2_only_params(ctx.model, ctx.user2.argmax),
                                         Scalarization::weighted(std::numeric_limits<double>::infinity()));
      out.feasible = true;
    }
    return out;
  }
  if (ctx.user1.zero || target > ctx.user1.value + kTargetSlack) return out;

  const double shifted = target + 1e-7;
  auto feasible = [&](const Candidate& c) {
    return std::isfinite(c.score) && c.rates.l1 >= target - kTargetSlack;
  };
  auto consider = [&](const Candidate& c) {
    if (!feasible(c)) return;
    if (!out.feasible || c.rates.l2 > out.best.rates.l2) {
      out.best = c;
      out.feasible = true;
    }
  };

  const auto coarse = search_region(ctx, Scalarization::eps_constraint(shifted, 1e4), config, extra_starts);
  for (const auto& c : coarse.ranked) consider(c);

  constexpr std::size_t kRefine = 4;
  std::vector<SearchStart> refine;
  for (const auto& c : coarse.ranked) {
    if (refine.size() == kRefine) break;
    if (c.theta.empty()) {
      refine.push_back({c.b_size, ParamCodec(ctx.model.inputs(), ctx.model.x0(), c.b_size).encode(c.params)});
    } else {
      refine.push_back({c.b_size, c.theta});
    }
  }
  OptimizerConfig fine = config;
  fine.local_iters = std::max<std::size_t>(config.local_iters, 4000);
  for (double penalty : {1e6, 1e8}) {
    const auto scal = Scalarization::eps_constraint(shifted, penalty);
    auto results = parallel_map(
        refine.size(), [&](std::size_t i) { return detail::local_search(ctx, refine[i], scal, fine); },
        config.workers());
    for (std::size_t i = 0; i < refine.size(); ++i) {
      consider(results[i].first);
      if (!results[i].first.theta.empty()) refine[i].theta = results[i].first.theta;
    }
  }
  return out;
}

/// Sampled boundary of the region: non-dominated points sorted by
/// decreasing L1 (hence increasing L2).
struct ParetoFront {
  std::vector<RatePair> points;
  std::vector<SuperpositionParams> params;
  nlohmann::json meta;
};

namespace detail {

inline void prune_dominated(std::vector<Candidate>& cands) {
  std::stable_sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
    if (a.rates.l1 != b.rates.l1) return a.rates.l1 > b.rates.l1;
    return a.rates.l2 > b.rates.l2;
  });
  std::vector<Candidate> kept;
  double best_l2 = -std::numeric_limits<double>::infinity();
  for (auto& c : cands) {
    if (c.rates.l2 > best_l2 + 1e-9) {
      best_l2 = c.rates.l2;
      kept.push_back(std::move(c));
    }
  }
  cands = std::move(kept);
}

}  // namespace detail

/// Boundary from the two single-user endpoints, `points - 2` epsilon-constraint
/// targets uniform in (0, L1*), and `config.weight_grid` weighted-sum optima
/// (the latter only when points > 2).
inline ParetoFront pareto_boundary(const RegionContext& ctx, std::size_t points,
                                   const OptimizerConfig& config) {
  config.validate();
  const RateEvaluator ev(ctx.model);
  std::vector<Candidate> all;
  for (const auto& p : ctx.endpoint_params())
    all.push_back(detail::exact_candidate(ev, p, Scalarization::weighted(0.0)));

  std::vector<SearchStart> warm;
  if (points > 2 && !ctx.user1.zero && !ctx.user2.zero) {
    for (std::size_t i = 0; i < config.weight_grid; ++i) {
      const double t = config.weight_grid == 1
                           ? 0.5
                           : static_cast<double>(i) / static_cast<double>(config.weight_grid - 1);
      const double weight = std::pow(10.0, -2.0 + 4.0 * t);
      const auto outcome = search_region(ctx, Scalarization::weighted(weight), config);
      if (outcome.empty()) continue;
      all.push_back(outcome.best());
      if (!outcome.best().theta.empty()) warm.push_back({outcome.best().b_size, outcome.best().theta});
    }
    const double l1s = ctx.user1.value;
    for (std::size_t i = 1; i + 1 < points; ++i) {
      const double target = l1s * static_cast<double>(i) / static_cast<double>(points - 1);
      const auto res = max_l2_given_l1(ctx, target, config, warm);
      if (!res.feasible) continue;
      all.push_back(res.best);
      if (!res.best.theta.empty()) warm.push_back({res.best.b_size, res.best.theta});
    }
  }
  detail::prune_dominated(all);

  ParetoFront front;
  for (auto& c : all) {
    front.points.push_back(c.rates);
    front.params.push_back(std::move(c.params));
  }
  front.meta = {{"config", config.to_json()}, {"points_requested", points},
                {"l1_star", ctx.user1.value}, {"l2_star", ctx.user2.value}};
  return front;
}

inline ParetoFront pareto_boundary(const BcWardenModel& model, std::size_t points,
                                   const OptimizerConfig& config) {
  return pareto_boundary(RegionContext(model), points, config);
}

struct GammaResult {
  double gamma = 1.0;
  double l1_star = 0.0;
  double l2_star = 0.0;
  RatePair point;
  SuperpositionParams params;
};

/// gamma* = max over the region of L1/L1* + L2/L2*.
inline GammaResult gamma_star(const RegionContext& ctx, const OptimizerConfig& config) {
  if (ctx.user1.zero || ctx.user1.value <= kZeroCapacity) throw ZeroCapacity(1);
  if (ctx.user2.zero || ctx.user2.value <= kZeroCapacity) throw ZeroCapacity(2);
  const auto outcome =
      search_region(ctx, Scalarization::normalized(ctx.user1.value, ctx.user2.value), config);
  GammaResult out;
  out.l1_star = ctx.user1.value;
  out.l2_star = ctx.user2.value;
  out.gamma = outcome.best().score;
  out.point = outcome.best().rates;
  out.params = outcome.best().params;
  return out;
}

inline GammaResult gamma_star(const BcWardenModel& model, const OptimizerConfig& config) {
  return gamma_star(RegionContext(model), config);
}

}  // namespace covert
