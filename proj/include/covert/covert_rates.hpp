#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "covert/channel_model.hpp"
#include "covert/error.hpp"
#include "covert/info_measures.hpp"
#include "covert/simplex_search.hpp"

namespace covert {

/// chi2 values at or below this are treated as "warden sees Q0".
inline constexpr double kDegenerateChi2 = 1e-14;
/// Capacities at or below this are treated as zero.
inline constexpr double kZeroCapacity = 1e-12;

/// Covert rate pair, in nats per sqrt(n delta).
struct RatePair {
  double l1 = 0.0;
  double l2 = 0.0;

  friend bool operator==(const RatePair&, const RatePair&) = default;
};

/// Decision variables of the superposition region with a singleton A = {u0}.
///
/// `ptilde_x_a` is stored over the full input alphabet and must put zero mass
/// on x0. Row u of `px_given_u_b` is P_{X|U}(.|u) for the u-th symbol of B.
struct SuperpositionParams {
  double nu = 0.0;
  Distribution ptilde_x_a;
  Distribution pu_b;
  Channel px_given_u_b;

  /// P_X^B = sum_u P_U^B(u) P_{X|U}(.|u).
  std::vector<double> px_b() const {
    std::vector<double> out(px_given_u_b.outputs(), 0.0);
    for (std::size_t u = 0; u < pu_b.size(); ++u)
      for (std::size_t x = 0; x < out.size(); ++x) out[x] += pu_b[u] * px_given_u_b(u, x);
    return out;
  }

  void validate(const BcWardenModel& model) const {
    const std::size_t nx = model.inputs();
    if (!(nu >= 0.0 && nu <= 1.0)) throw ModelError(ModelError::Kind::Range, "nu must lie in [0,1]");
    if (ptilde_x_a.size() != nx || px_given_u_b.outputs() != nx) {
      throw ModelError(ModelError::Kind::Dimension, "superposition params do not match |X|");
    }
    if (pu_b.size() != px_given_u_b.inputs()) {
      throw ModelError(ModelError::Kind::Dimension, "pu_b and px_given_u_b disagree on |B|");
    }
    if (ptilde_x_a[model.x0()] != 0.0) {
      throw ModelError(ModelError::Kind::Range, "ptilde_x_a must put zero mass on x0");
    }
  }
};

/// Precomputed per-model quantities for fast repeated rate evaluation.
///
/// Mutual informations use I(X;Y) = H(Y) - H(Y|X) with the row entropies
/// cached; divergences to the x0 rows are cached per input symbol.
class RateEvaluator {
 public:
  explicit RateEvaluator(const BcWardenModel& model)
      : nx_(model.inputs()),
        x0_(model.x0()),
        q_(model.q()),
        q0_(model.q().row(model.x0()).begin(), model.q().row(model.x0()).end()) {
    for (int k = 0; k < 2; ++k) {
      const Channel& ch = k == 0 ? model.p1() : model.p2();
      users_[k].channel = ch;
      users_[k].div_to_x0.resize(nx_);
      users_[k].neg_entropy.resize(nx_);
      for (std::size_t x = 0; x < nx_; ++x) {
        users_[k].div_to_x0[x] = kl_divergence(ch.row(x), ch.row(x0_));
        double h = 0.0;
        for (double p : ch.row(x))
          if (p > 0.0) h += p * std::log(p);
        users_[k].neg_entropy[x] = h;
      }
    }
    py_.resize(std::max(model.p1().outputs(), model.p2().outputs()));
    pz_.resize(q_.outputs());
    mix_.resize(nx_);
    pxb_.resize(nx_);
  }

  std::size_t inputs() const noexcept { return nx_; }
  std::size_t x0() const noexcept { return x0_; }
  std::span<const double> q0() const noexcept { return q0_; }

  /// D(P_{Y_k|X}(.|x) || P_{Y_k|X}(.|x0)), k in {1,2}.
  std::span<const double> divergences(int k) const { return users_[k - 1].div_to_x0; }

  /// I(X;Y_k) under input law px.
  double mutual_information(int k, std::span<const double> px) const {
    const auto& u = users_[k - 1];
    const std::size_t ny = u.channel.outputs();
    std::span<double> py(py_.data(), ny);
    std::fill(py.begin(), py.end(), 0.0);
    double cond = 0.0;
    for (std::size_t x = 0; x < nx_; ++x) {
      if (px[x] == 0.0) continue;
      cond += px[x] * u.neg_entropy[x];
      const auto row = u.channel.row(x);
      for (std::size_t y = 0; y < ny; ++y) py[y] += px[x] * row[y];
    }
    double out = 0.0;
    for (double p : py)
      if (p > 0.0) out -= p * std::log(p);
    const double mi = out + cond;
    return mi > 0.0 ? mi : 0.0;
  }

  /// chi2(w * Q || Q0) for an input law w over X.
  double warden_chi2(std::span<const double> w) const {
    output_into(w, q_, pz_);
    return chi2_distance(pz_, q0_);
  }

  struct Evaluation {
    RatePair rates;
    double chi2 = 0.0;
    bool degenerate = false;
  };

  /// Rates of the superposition region for raw parameter arrays; `pxu` is
  /// |B| x |X| row-major.
  Evaluation evaluate(double nu, std::span<const double> ptilde, std::span<const double> pu,
                      std::span<const double> pxu) const {
    const std::size_t nb = pu.size();
    std::fill(pxb_.begin(), pxb_.end(), 0.0);
    double i1 = 0.0, i2 = 0.0;  // I^B(Y_k;X|U)
    for (std::size_t u = 0; u < nb; ++u) {
      if (pu[u] == 0.0) continue;
      const auto row = pxu.subspan(u * nx_, nx_);
      for (std::size_t x = 0; x < nx_; ++x) pxb_[x] += pu[u] * row[x];
      i1 += pu[u] * mutual_information(1, row);
      i2 += pu[u] * mutual_information(2, row);
    }
    double a1 = 0.0, b2 = 0.0;
    for (std::size_t x = 0; x < nx_; ++x) {
      a1 += ptilde[x] * users_[0].div_to_x0[x];
      b2 += pxb_[x] * users_[1].div_to_x0[x];
      mix_[x] = (1.0 - nu) * ptilde[x] + nu * pxb_[x];
    }
    Evaluation ev;
    ev.chi2 = warden_chi2(mix_);
    if (!(ev.chi2 > kDegenerateChi2)) {
      // Nothing leaves x0 in a way either user can decode: rates are 0, not 0/0.
      const bool silent = (1.0 - nu) * a1 + nu * i1 == 0.0 && nu * (b2 - i2) <= 0.0;
      ev.degenerate = !silent;
      return ev;
    }
    const double scale = std::sqrt(2.0 / ev.chi2);
    ev.rates.l1 = scale * ((1.0 - nu) * a1 + nu * i1);
    ev.rates.l2 = std::max(0.0, scale * nu * (b2 - i2));
    if (ev.rates.l1 < 0.0) ev.rates.l1 = 0.0;
    return ev;
  }

  RatePair rate_pair(const SuperpositionParams& p) const {
    const auto ev = evaluate(p.nu, p.ptilde_x_a.probs(), p.pu_b.probs(), flat(p.px_given_u_b));
    if (ev.degenerate) throw DegenerateDivergence();
    return ev.rates;
  }

  static std::vector<double> flat(const Channel& ch) {
    std::vector<double> out;
    out.reserve(ch.inputs() * ch.outputs());
    for (std::size_t r = 0; r < ch.inputs(); ++r) {
      const auto row = ch.row(r);
      out.insert(out.end(), row.begin(), row.end());
    }
    return out;
  }

 private:
  struct User {
    Channel channel;
    std::vector<double> div_to_x0;
    std::vector<double> neg_entropy;
  };

  std::size_t nx_;
  std::size_t x0_;
  Channel q_;
  std::vector<double> q0_;
  User users_[2];
  // Scratch buffers; an evaluator must not be shared across threads.
  mutable std::vector<double> py_, pz_, mix_, pxb_;
};

/// chi2((1 - nu) P~_Z^A + nu P_Z^B || Q0).
inline double chi2_nu(const BcWardenModel& model, const SuperpositionParams& params) {
  params.validate(model);
  const auto pz_a = output_vector(params.ptilde_x_a.probs(), model.q());
  const auto pz_b = output_vector(params.px_b(), model.q());
  std::vector<double> mix(pz_a.size());
  for (std::size_t z = 0; z < mix.size(); ++z)
    mix[z] = (1.0 - params.nu) * pz_a[z] + params.nu * pz_b[z];
  const double value = chi2_distance(mix, model.q().row(model.x0()));
  if (!(value > kDegenerateChi2)) throw DegenerateDivergence();
  return value;
}

/// Rate pair attained by the given superposition parameters.
inline RatePair rate_pair(const BcWardenModel& model, const SuperpositionParams& params) {
  params.validate(model);
  return RateEvaluator(model).rate_pair(params);
}

struct SingleUserCapacity {
  double value = 0.0;
  /// Maximizing input law over X (zero on x0).
  Distribution argmax;
  /// True when every divergence to the x0 row vanishes.
  bool zero = false;
};

namespace detail {

// sqrt(2) <d, p> / sqrt(chi2(p Q || Q0)); quasiconcave in p on the simplex.
class SingleUserObjective {
 public:
  SingleUserObjective(const Channel& marginal, const Channel& warden, std::size_t x0)
      : warden_(warden), x0_(x0), q0_(warden.row(x0).begin(), warden.row(x0).end()),
        pz_(warden.outputs()) {
    for (std::size_t x = 0; x < marginal.inputs(); ++x)
      div_.push_back(kl_divergence(marginal.row(x), marginal.row(x0)));
  }

  std::span<const double> divergences() const { return div_; }

  double operator()(std::span<const double> p) const {
    double num = 0.0;
    for (std::size_t x = 0; x < p.size(); ++x) num += p[x] * div_[x];
    output_into(p, warden_, pz_);
    const double c = chi2_distance(pz_, q0_);
    if (!(c > kDegenerateChi2)) return num > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    return std::sqrt(2.0 / c) * num;
  }

 private:
  const Channel& warden_;
  std::size_t x0_;
  std::vector<double> q0_;
  std::vector<double> div_;
  mutable std::vector<double> pz_;
};

}  // namespace detail

/// Single-user covert capacity max_{P~ on X\{x0}} sqrt(2/chi2) sum P~ D(.||x0).
inline SingleUserCapacity single_user_capacity(const Channel& marginal, const Channel& warden,
                                               std::size_t x0) {
  if (marginal.inputs() != warden.inputs() || x0 >= marginal.inputs()) {
    throw ModelError(ModelError::Kind::Dimension, "single_user_capacity: mismatched channels");
  }
  const std::size_t nx = marginal.inputs();
  detail::SingleUserObjective objective(marginal, warden, x0);

  std::vector<std::size_t> active;  // X \ {x0}
  for (std::size_t x = 0; x < nx; ++x)
    if (x != x0) active.push_back(x);
  if (active.empty()) {
    return {0.0, Distribution::point_mass(nx, x0), true};
  }

  const auto div = objective.divergences();
  const bool zero = std::all_of(active.begin(), active.end(), [&](std::size_t x) { return div[x] == 0.0; });
  if (zero) return {0.0, Distribution::point_mass(nx, active.front()), true};

  std::vector<double> best_p(nx, 0.0);
  double best = -1.0;
  std::vector<double> p(nx, 0.0);
  auto consider = [&](std::span<const double> cand) {
    const double v = objective(cand);
    if (std::isinf(v)) throw DegenerateDivergence();
    if (v > best) {
      best = v;
      best_p.assign(cand.begin(), cand.end());
    }
  };

  // Vertices and edges: the objective is quasiconcave, hence unimodal on segments.
  for (std::size_t i = 0; i < active.size(); ++i) {
    std::fill(p.begin(), p.end(), 0.0);
    p[active[i]] = 1.0;
    consider(p);
    for (std::size_t j = i + 1; j < active.size(); ++j) {
      auto along = [&](double t) {
        std::fill(p.begin(), p.end(), 0.0);
        p[active[i]] = 1.0 - t;
        p[active[j]] = t;
        return objective(p);
      };
      const auto [t, v] = search::golden_section_max(along, 0.0, 1.0, 1e-13);
      (void)v;
      std::fill(p.begin(), p.end(), 0.0);
      p[active[i]] = 1.0 - t;
      p[active[j]] = t;
      consider(p);
    }
  }

  // Interior search for supports of size >= 3.
  if (active.size() >= 3) {
    const std::size_t k = active.size();
    std::vector<double> sub(k);
    auto to_full = [&](std::span<const double> logits) {
      search::softmax_into(logits, sub);
      std::fill(p.begin(), p.end(), 0.0);
      for (std::size_t i = 0; i < k; ++i) p[active[i]] = sub[i];
    };
    auto neg = [&](std::span<const double> logits) {
      to_full(logits);
      return -objective(p);
    };
    std::vector<std::vector<double>> starts;
    starts.emplace_back(k - 1, 0.0);
    {
      std::vector<double> blended(k), logits(k - 1);
      for (std::size_t i = 0; i < k; ++i) blended[i] = 0.9 * best_p[active[i]] + 0.1 / static_cast<double>(k);
      search::logits_from_pmf(blended, logits);
      starts.push_back(logits);
    }
    search::NelderMeadOptions opt;
    opt.max_evaluations = 20000;
    opt.restarts = 4;
    for (const auto& s : starts) {
      auto r = search::nelder_mead(neg, s, opt);
      to_full(r.x);
      consider(p);
    }
  }

  for (double& v : best_p) v = std::max(v, 0.0);
  best_p[x0] = 0.0;
  return {best, Distribution(best_p), false};
}

/// L1/L1* + L2/L2*; the point lies in the time-sharing region iff <= 1.
inline double ts_region_bound(double l1_star, double l2_star, const RatePair& point) {
  return point.l1 / l1_star + point.l2 / l2_star;
}

struct TsOptimality {
  double sup_ratio = 0.0;
  bool holds = false;
  /// Some input law gave I(X;Y2) = 0 with I(X;Y1) > 0.
  bool undefined_ratio = false;
};

/// Checks L1*/L2* >= sup_{P_X} I(X;Y1)/I(X;Y2) by a simplex grid with step
/// `resolution`, local refinement, and the vertex limits of the ratio.
///
/// A zero user-2 capacity makes L1*/L2* infinite: the condition then holds
/// vacuously and sup_ratio is reported as +inf.
inline TsOptimality ts_optimality_condition(const BcWardenModel& model, double l1_star,
                                            double l2_star, double resolution = 0.01) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  constexpr double kTiny = 1e-15;
  // Near a vertex both informations sink into round-off; ratios are only
  // trusted above this level and the vertex limits cover the rest.
  constexpr double kResolvable = 1e-9;
  constexpr double kVertexMargin = 1e-3;
  TsOptimality out;
  if (l2_star <= kZeroCapacity) {
    out.sup_ratio = kInf;
    out.holds = true;
    return out;
  }
  const RateEvaluator ev(model);
  const std::size_t nx = model.inputs();
  double sup = 0.0;

  auto ratio_at = [&](std::span<const double> px) -> std::optional<double> {
    if (*std::max_element(px.begin(), px.end()) > 1.0 - kVertexMargin) return std::nullopt;
    const double i1 = ev.mutual_information(1, px);
    const double i2 = ev.mutual_information(2, px);
    if (i2 <= kResolvable) {
      if (i2 <= kTiny && i1 > kResolvable) out.undefined_ratio = true;
      return std::nullopt;
    }
    return i1 / i2;
  };

  // Grid over the full input simplex (compositions of `steps`).
  const auto steps = static_cast<std::size_t>(std::llround(1.0 / resolution));
  std::vector<std::size_t> counts(nx, 0);
  std::vector<double> px(nx);
  std::vector<std::pair<double, std::vector<double>>> top;
  auto record = [&](double r) {
    sup = std::max(sup, r);
    top.emplace_back(r, px);
    std::sort(top.begin(), top.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    if (top.size() > 3) top.pop_back();
  };
  auto visit = [&](auto&& self, std::size_t idx, std::size_t left) -> void {
    if (idx + 1 == nx) {
      counts[idx] = left;
      for (std::size_t x = 0; x < nx; ++x)
        px[x] = static_cast<double>(counts[x]) / static_cast<double>(steps);
      if (auto r = ratio_at(px)) record(*r);
      return;
    }
    for (std::size_t c = 0; c <= left; ++c) {
      counts[idx] = c;
      self(self, idx + 1, left - c);
    }
  };
  visit(visit, 0, steps);

  // Local refinement in softmax coordinates.
  std::vector<double> logits(nx - 1);
  auto neg_ratio = [&](std::span<const double> t) {
    search::softmax_into(t, px);
    const auto r = ratio_at(px);
    return r ? -*r : 0.0;
  };
  search::NelderMeadOptions opt;
  opt.max_evaluations = 4000;
  for (const auto& [r, start] : std::vector(top)) {
    search::logits_from_pmf(start, logits, 1e-9);
    const auto res = search::nelder_mead(neg_ratio, logits, opt);
    sup = std::max(sup, -res.value);
  }

  // Vertex limits: P_X = (1-a) e_v + a e_w with a -> 0 gives D1(w||v)/D2(w||v).
  const Channel& p1 = model.p1();
  const Channel& p2 = model.p2();
  for (std::size_t v = 0; v < nx; ++v) {
    for (std::size_t w = 0; w < nx; ++w) {
      if (v == w) continue;
      double d1 = kInf, d2 = kInf;
      try {
        d1 = kl_divergence(p1.row(w), p1.row(v));
      } catch (const SupportError&) {
      }
      try {
        d2 = kl_divergence(p2.row(w), p2.row(v));
      } catch (const SupportError&) {
      }
      if (std::isinf(d2)) continue;
      if (d2 <= kTiny) {
        if (d1 > 1e-12) out.undefined_ratio = true;
        continue;
      }
      sup = std::max(sup, d1 / d2);
    }
  }

  if (out.undefined_ratio) sup = kInf;
  out.sup_ratio = sup;
  out.holds = !out.undefined_ratio && l1_star / l2_star >= sup - 1e-6;
  return out;
}

/// Time-sharing coefficients alpha_1(nu), alpha_2(nu) from the single-user
/// optimal warden outputs.
inline std::pair<double, double> alpha_coefficients(double nu, std::span<const double> pz1_star,
                                                    std::span<const double> pz2_star,
                                                    std::span<const double> q0) {
  std::vector<double> mix(q0.size());
  for (std::size_t z = 0; z < mix.size(); ++z) mix[z] = (1.0 - nu) * pz1_star[z] + nu * pz2_star[z];
  const double denom = chi2_distance(mix, q0);
  if (!(denom > kDegenerateChi2)) throw DegenerateDivergence();
  const double s = std::sqrt(denom);
  return {(1.0 - nu) * std::sqrt(chi2_distance(pz1_star, q0)) / s,
          nu * std::sqrt(chi2_distance(pz2_star, q0)) / s};
}

/// Parameters attaining (L1*, 0): all time on the A layer with P~ = P1*.
inline SuperpositionParams user1_only_params(const BcWardenModel& model, const Distribution& p1_star) {
  return {0.0, p1_star, Distribution{1.0},
          Channel(std::vector<std::vector<double>>{
              Distribution::point_mass(model.inputs(), model.x0()).vector()})};
}

/// Parameters attaining (0, L2*): all time on the B layer, U -> X one-to-one
/// over X \ {x0} with P_U^B = P2*.
inline SuperpositionParams user2_only_params(const BcWardenModel& model, const Distribution& p2_star) {
  const std::size_t nx = model.inputs();
  std::vector<double> pu;
  std::vector<std::vector<double>> rows;
  for (std::size_t x = 0; x < nx; ++x) {
    if (x == model.x0()) continue;
    pu.push_back(p2_star[x]);
    rows.push_back(Distribution::point_mass(nx, x).vector());
  }
  return {1.0, p2_star, Distribution(pu), Channel(rows)};
}

}  // namespace covert
