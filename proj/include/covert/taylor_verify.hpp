#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "covert/channel_model.hpp"
#include "covert/error.hpp"
#include "covert/info_measures.hpp"
#include "covert/parallel.hpp"

// Finite-difference checks of the small-weight expansion of mutual
// informations and the warden divergence around "always send x0".

namespace covert::taylor {

/// Layered input law: U ranges over A (indices 0..|A|-1) followed by B.
///
///   P_U(u)     = (1 - mu1) P_U^A(u) on A,  mu1 P_U^B(u) on B
///   P_X|U(.|u) = (1 - mu2) e_x0 + mu2 P~_X|U(.|u) on A,  P_X|U^B(.|u) on B
struct StructuredJoint {
  double mu1 = 0.0;
  double mu2 = 0.0;
  Distribution pu_a;
  Distribution pu_b;
  Channel px_given_u_b;        // |B| x |X|
  Channel ptilde_x_given_u_a;  // |A| x |X|, zero column at x0
  std::size_t x0 = 0;

  std::size_t a_size() const noexcept { return pu_a.size(); }
  std::size_t b_size() const noexcept { return pu_b.size(); }
  std::size_t inputs() const noexcept { return px_given_u_b.outputs(); }

  StructuredJoint at(double m1, double m2) const {
    StructuredJoint out = *this;
    out.mu1 = m1;
    out.mu2 = m2;
    return out;
  }

  std::vector<double> pu() const {
    std::vector<double> out;
    for (double p : pu_a) out.push_back((1.0 - mu1) * p);
    for (double p : pu_b) out.push_back(mu1 * p);
    return out;
  }

  /// Rows of P_X|U in the order A, B (valid for mu2 in [0, 1]).
  Channel px_given_u() const {
    std::vector<std::vector<double>> rows;
    for (std::size_t u = 0; u < a_size(); ++u) {
      std::vector<double> row(inputs());
      for (std::size_t x = 0; x < inputs(); ++x)
        row[x] = mu2 * ptilde_x_given_u_a(u, x) + (x == x0 ? 1.0 - mu2 : 0.0);
      rows.push_back(std::move(row));
    }
    for (std::size_t u = 0; u < b_size(); ++u) {
      const auto r = px_given_u_b.row(u);
      rows.emplace_back(r.begin(), r.end());
    }
    return Channel(rows);
  }

  /// P_{U,X}(u, x) as a |U| x |X| table.
  std::vector<std::vector<double>> joint_ux() const {
    const auto p = pu();
    const Channel ch = px_given_u();
    std::vector<std::vector<double>> out(p.size(), std::vector<double>(inputs()));
    for (std::size_t u = 0; u < p.size(); ++u)
      for (std::size_t x = 0; x < inputs(); ++x) out[u][x] = p[u] * ch(u, x);
    return out;
  }

  /// P~_X^A = sum_{u in A} P_U^A(u) P~_X|U(.|u).
  std::vector<double> ptilde_x_a() const { return mix(pu_a, ptilde_x_given_u_a); }

  /// P_X^B = sum_{u in B} P_U^B(u) P_X|U^B(.|u).
  std::vector<double> px_b() const { return mix(pu_b, px_given_u_b); }

  /// (1-mu1)(1-mu2) e_x0 + (1-mu1) mu2 P~_X^A + mu1 P_X^B; a polynomial in
  /// (mu1, mu2), so it is also defined for small negative weights.
  std::vector<double> marginal_x() const {
    const auto a = ptilde_x_a();
    const auto b = px_b();
    std::vector<double> out(inputs());
    for (std::size_t x = 0; x < inputs(); ++x)
      out[x] = (1.0 - mu1) * mu2 * a[x] + mu1 * b[x] + (x == x0 ? (1.0 - mu1) * (1.0 - mu2) : 0.0);
    return out;
  }

 private:
  static std::vector<double> mix(const Distribution& w, const Channel& rows) {
    std::vector<double> out(rows.outputs(), 0.0);
    for (std::size_t u = 0; u < w.size(); ++u)
      for (std::size_t x = 0; x < out.size(); ++x) out[x] += w[u] * rows(u, x);
    return out;
  }
};

/// Layer quantities that do not depend on (mu1, mu2).
struct LayerMarginals {
  std::vector<double> ptilde_x_a, px_b;
  std::vector<double> ptilde_z_a, pz_b;
  std::array<Channel, 2> py_given_u_b;         // P_{Y_k|U}^B
  std::array<Channel, 2> ptilde_y_given_u_a;   // P~_{Y_k|U}^A
};

inline LayerMarginals layer_marginals(const BcWardenModel& model, const StructuredJoint& sj) {
  LayerMarginals m;
  m.ptilde_x_a = sj.ptilde_x_a();
  m.px_b = sj.px_b();
  m.ptilde_z_a = output_vector(m.ptilde_x_a, model.q());
  m.pz_b = output_vector(m.px_b, model.q());
  for (int k = 0; k < 2; ++k) {
    m.py_given_u_b[k] = sj.px_given_u_b.then(model.user(k + 1));
    m.ptilde_y_given_u_a[k] = sj.ptilde_x_given_u_a.then(model.user(k + 1));
  }
  return m;
}

inline StructuredJoint build_structured_joint(const BcWardenModel& model, double mu1, double mu2,
                                              Distribution pu_a, Distribution pu_b, Channel px_given_u_b,
                                              Channel ptilde_x_given_u_a) {
  const std::size_t nx = model.inputs();
  if (!(mu1 >= 0.0 && mu1 <= 1.0 && mu2 >= 0.0 && mu2 <= 1.0)) {
    throw ModelError(ModelError::Kind::Range, "mu1 and mu2 must lie in [0,1]");
  }
  if (px_given_u_b.inputs() != pu_b.size() || ptilde_x_given_u_a.inputs() != pu_a.size()) {
    throw ModelError(ModelError::Kind::Dimension, "layer pmfs and conditional rows disagree in size");
  }
  if (px_given_u_b.outputs() != nx || ptilde_x_given_u_a.outputs() != nx) {
    throw ModelError(ModelError::Kind::Dimension, "conditional rows must range over the input alphabet");
  }
  for (std::size_t u = 0; u < ptilde_x_given_u_a.inputs(); ++u) {
    if (ptilde_x_given_u_a(u, model.x0()) != 0.0) {
      throw ModelError(ModelError::Kind::Range,
                       "A-layer row " + std::to_string(u) + " must put zero mass on x0");
    }
  }
  return {mu1, mu2, std::move(pu_a), std::move(pu_b), std::move(px_given_u_b),
          std::move(ptilde_x_given_u_a), model.x0()};
}

// Exact information quantities of a structured joint.

inline double mi_uy(const BcWardenModel& model, const StructuredJoint& sj, int k) {
  return mutual_information(sj.pu(), sj.px_given_u().then(model.user(k)));
}

inline double mi_xy(const BcWardenModel& model, const StructuredJoint& sj, int k) {
  return mutual_information(sj.marginal_x(), model.user(k));
}

/// I(X;Y_k|U) = sum_u P_U(u) I(X;Y_k|U=u).
inline double cmi_xy_given_u(const BcWardenModel& model, const StructuredJoint& sj, int k) {
  return conditional_mutual_information(sj.pu(), sj.px_given_u(), model.user(k));
}

/// D(P_Z || Q0); valid for small negative weights as long as P_Z stays positive.
inline double warden_divergence(const BcWardenModel& model, const StructuredJoint& sj) {
  const auto px = sj.marginal_x();
  std::vector<double> pz(model.q().outputs(), 0.0);
  for (std::size_t x = 0; x < px.size(); ++x)
    for (std::size_t z = 0; z < pz.size(); ++z) pz[z] += px[x] * model.q()(x, z);
  const auto q0 = model.q().row(model.x0());
  double d = 0.0;
  for (std::size_t z = 0; z < pz.size(); ++z) {
    if (pz[z] == 0.0) continue;
    if (pz[z] < 0.0 || q0[z] == 0.0) throw SupportError(SupportError::Kind::AbsoluteContinuity, z);
    d += pz[z] * std::log(pz[z] / q0[z]);
  }
  return d;
}

// Closed-form derivatives at mu1 = mu2 = 0.

/// d/dmu1 I(U;Y_k) = sum_{u in B} P_U^B(u) D(P_{Y_k|U}^B(.|u) || P_{Y_k|X}(.|x0)).
inline double d_iuy_mu1(const BcWardenModel& model, const StructuredJoint& sj, int k) {
  const Channel py = sj.px_given_u_b.then(model.user(k));
  const auto ref = model.user(k).row(sj.x0);
  double out = 0.0;
  for (std::size_t u = 0; u < sj.b_size(); ++u) out += sj.pu_b[u] * kl_divergence(py.row(u), ref);
  return out;
}

inline double d_iuy_mu2(const BcWardenModel&, const StructuredJoint&, int) { return 0.0; }

namespace detail {
inline double weighted_divergence(const BcWardenModel& model, std::span<const double> w, int k,
                                  std::size_t x0) {
  const auto ref = model.user(k).row(x0);
  double out = 0.0;
  for (std::size_t x = 0; x < w.size(); ++x)
    if (w[x] > 0.0) out += w[x] * kl_divergence(model.user(k).row(x), ref);
  return out;
}
}  // namespace detail

/// d/dmu1 I(X;Y_k) = sum_x P_X^B(x) D(P_{Y_k|X}(.|x) || P_{Y_k|X}(.|x0)).
inline double d_ixy_mu1(const BcWardenModel& model, const StructuredJoint& sj, int k) {
  return detail::weighted_divergence(model, sj.px_b(), k, sj.x0);
}

/// d/dmu2 I(X;Y_k) = sum_x P~_X^A(x) D(P_{Y_k|X}(.|x) || P_{Y_k|X}(.|x0)).
inline double d_ixy_mu2(const BcWardenModel& model, const StructuredJoint& sj, int k) {
  return detail::weighted_divergence(model, sj.ptilde_x_a(), k, sj.x0);
}

using Matrix2 = std::array<std::array<double, 2>, 2>;

/// Hessian of D(P_Z||Q0) at the origin:
/// [[chi2(P_Z^B), chi2(P~_Z^A, P_Z^B)], [chi2(P~_Z^A, P_Z^B), chi2(P~_Z^A)]].
inline Matrix2 divergence_hessian(const BcWardenModel& model, const StructuredJoint& sj) {
  const auto lm = layer_marginals(model, sj);
  const auto q0 = model.q().row(sj.x0);
  const double cross = cross_chi2(lm.ptilde_z_a, lm.pz_b, q0);
  return {{{chi2_distance(lm.pz_b, q0), cross}, {cross, chi2_distance(lm.ptilde_z_a, q0)}}};
}

enum class Quantity { MutualInfoUY, MutualInfoXY };
enum class Weight { Mu1, Mu2 };

struct DerivativeCheck {
  double fd_value = 0.0;
  double formula_value = 0.0;
  double abs_err = 0.0;
  double h = 0.0;

  double rel_err() const {
    return std::abs(formula_value) > 0.0 ? abs_err / std::abs(formula_value) : abs_err;
  }
};

/// One-sided differences at the origin (the other weight held at 0) with one
/// Richardson step between h and h/2.
inline DerivativeCheck fd_mi_derivative_check(const BcWardenModel& model, const StructuredJoint& sj,
                                              int k, Quantity quantity, Weight wrt, double h = 1e-4) {
  if (!(h > 0.0 && h <= 1e-2)) throw ModelError(ModelError::Kind::Range, "step h must lie in (0, 1e-2]");
  auto value = [&](double t) {
    const StructuredJoint p = wrt == Weight::Mu1 ? sj.at(t, 0.0) : sj.at(0.0, t);
    return quantity == Quantity::MutualInfoUY ? mi_uy(model, p, k) : mi_xy(model, p, k);
  };
  const double f0 = value(0.0);
  const double coarse = (value(h) - f0) / h;
  const double fine = (value(0.5 * h) - f0) / (0.5 * h);

  DerivativeCheck out;
  out.h = h;
  out.fd_value = 2.0 * fine - coarse;
  if (quantity == Quantity::MutualInfoUY)
    out.formula_value = wrt == Weight::Mu1 ? d_iuy_mu1(model, sj, k) : d_iuy_mu2(model, sj, k);
  else
    out.formula_value = wrt == Weight::Mu1 ? d_ixy_mu1(model, sj, k) : d_ixy_mu2(model, sj, k);
  out.abs_err = std::abs(out.fd_value - out.formula_value);
  return out;
}

struct HessianCheck {
  Matrix2 fd{};
  Matrix2 formula{};
  std::array<double, 2> gradient{};  // central first differences; should vanish
  double symmetry_gap = 0.0;         // |fd01 - fd10| before symmetrization
  double h = 0.0;

  /// Largest entrywise |fd - formula| / |formula|.
  double max_rel_err() const {
    double worst = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        const double err = std::abs(fd[i][j] - formula[i][j]);
        worst = std::max(worst, std::abs(formula[i][j]) > 0.0 ? err / std::abs(formula[i][j]) : err);
      }
    return worst;
  }
};

/// Central second differences of D(P_Z||Q0) at the origin, Richardson-combined
/// over steps h and h/2.
inline HessianCheck fd_divergence_hessian_check(const BcWardenModel& model, const StructuredJoint& sj,
                                                double h = 1e-3) {
  if (!(h > 0.0 && h <= 1e-2)) throw ModelError(ModelError::Kind::Range, "step h must lie in (0, 1e-2]");
  auto d = [&](double a, double b) { return warden_divergence(model, sj.at(a, b)); };
  const double d00 = d(0.0, 0.0);

  auto second = [&](double s) {
    Matrix2 m{};
    m[0][0] = (d(s, 0.0) - 2.0 * d00 + d(-s, 0.0)) / (s * s);
    m[1][1] = (d(0.0, s) - 2.0 * d00 + d(0.0, -s)) / (s * s);
    // Mixed partial two ways: difference in mu1 of mu2-differences, and vice versa.
    auto d2 = [&](double a) { return (d(a, s) - d(a, -s)) / (2.0 * s); };
    auto d1 = [&](double b) { return (d(s, b) - d(-s, b)) / (2.0 * s); };
    m[0][1] = (d2(s) - d2(-s)) / (2.0 * s);
    m[1][0] = (d1(s) - d1(-s)) / (2.0 * s);
    return m;
  };
  const Matrix2 coarse = second(h);
  const Matrix2 fine = second(0.5 * h);

  HessianCheck out;
  out.h = h;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.fd[i][j] = (4.0 * fine[i][j] - coarse[i][j]) / 3.0;
  out.symmetry_gap = std::abs(out.fd[0][1] - out.fd[1][0]);
  const double sym = 0.5 * (out.fd[0][1] + out.fd[1][0]);
  out.fd[0][1] = out.fd[1][0] = sym;
  out.formula = divergence_hessian(model, sj);
  out.gradient = {(d(h, 0.0) - d(-h, 0.0)) / (2.0 * h), (d(0.0, h) - d(0.0, -h)) / (2.0 * h)};
  return out;
}

/// Limits of sqrt(n) I(X;Y1|U), sqrt(n) I(U;Y2) and n D(P_Z||Q0) as n grows
/// with mu_i = eta_i / sqrt(n).
struct FirstOrderLimits {
  double l1 = 0.0;
  double l2 = 0.0;
  double divergence = 0.0;
};

inline FirstOrderLimits first_order_limits(const BcWardenModel& model, const StructuredJoint& sj,
                                           double eta1, double eta2) {
  FirstOrderLimits lim;
  lim.l1 = eta1 * (d_ixy_mu1(model, sj, 1) - d_iuy_mu1(model, sj, 1)) + eta2 * d_ixy_mu2(model, sj, 1);
  lim.l2 = eta1 * d_iuy_mu1(model, sj, 2);
  const Matrix2 hess = divergence_hessian(model, sj);
  lim.divergence =
      0.5 * (eta1 * eta1 * hess[0][0] + 2.0 * eta1 * eta2 * hess[0][1] + eta2 * eta2 * hess[1][1]);
  return lim;
}

struct FirstOrderRow {
  double n = 0.0;
  FirstOrderLimits exact;
  double deviation = 0.0;  // max relative gap to the limits (absolute where a limit is 0)
};

struct FirstOrderReport {
  FirstOrderLimits limits;
  std::vector<FirstOrderRow> rows;
  bool monotone = true;
  double final_deviation = 0.0;

  bool passed(double tolerance = 1e-2) const { return monotone && final_deviation <= tolerance; }
};

inline FirstOrderReport first_order_region_check(const BcWardenModel& model, const StructuredJoint& sj,
                                                 double eta1, double eta2, const std::vector<double>& ns) {
  FirstOrderReport report;
  report.limits = first_order_limits(model, sj, eta1, eta2);
  auto gap = [](double exact, double limit) {
    const double err = std::abs(exact - limit);
    return std::abs(limit) > 1e-12 ? err / std::abs(limit) : err;
  };
  for (double n : ns) {
    const double root = std::sqrt(n);
    const StructuredJoint p = sj.at(eta1 / root, eta2 / root);
    FirstOrderRow row;
    row.n = n;
    row.exact.l1 = root * cmi_xy_given_u(model, p, 1);
    row.exact.l2 = root * mi_uy(model, p, 2);
    row.exact.divergence = n * warden_divergence(model, p);
    row.deviation = std::max({gap(row.exact.l1, report.limits.l1), gap(row.exact.l2, report.limits.l2),
                              gap(row.exact.divergence, report.limits.divergence)});
    if (!report.rows.empty()) {
      const double prev = report.rows.back().deviation;
      if (!(row.deviation < prev || (row.deviation == 0.0 && prev == 0.0))) report.monotone = false;
    }
    report.rows.push_back(row);
  }
  report.final_deviation = report.rows.empty() ? 0.0 : report.rows.back().deviation;
  return report;
}

/// Random structured joint with |A| in {1,2}, |B| in {1,2,3} and strictly
/// positive layer pmfs.
inline StructuredJoint random_structured_joint(const BcWardenModel& model, std::mt19937_64& rng) {
  const std::size_t nx = model.inputs();
  std::uniform_int_distribution<std::size_t> a_size(1, 2), b_size(1, 3);
  std::exponential_distribution<double> gamma1(1.0);
  auto pmf = [&](std::size_t k, std::size_t skip) {
    std::vector<double> p(k, 0.0);
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i)
      if (i != skip) sum += p[i] = 0.05 + gamma1(rng);
    for (double& v : p) v /= sum;
    return p;
  };
  const std::size_t na = a_size(rng), nb = b_size(rng);
  std::vector<std::vector<double>> ta, pb;
  for (std::size_t u = 0; u < na; ++u) ta.push_back(pmf(nx, model.x0()));
  for (std::size_t u = 0; u < nb; ++u) pb.push_back(pmf(nx, nx));
  return build_structured_joint(model, 0.0, 0.0, Distribution(pmf(na, na)), Distribution(pmf(nb, nb)),
                                Channel(pb), Channel(ta));
}

struct SuiteOptions {
  std::size_t joints = 20;
  std::uint64_t seed = 1;
  double h_gradient = 1e-4;
  double h_hessian = 1e-3;
  std::vector<double> ns{1e3, 1e4, 1e5, 1e6};
  double derivative_tolerance = 1e-2;  // relative, first derivatives
  double hessian_tolerance = 5e-2;     // relative, Hessian entries
};

struct JointResult {
  double max_derivative_rel_err = 0.0;
  double max_uy_mu2_fd = 0.0;  // |fd of I(U;Y_k) in mu2|, should be <= 10 h
  double hessian_rel_err = 0.0;
  double max_gradient = 0.0;   // should be <= 10 h^2
  double symmetry_gap = 0.0;
  double chain_gap = 0.0;      // |I(X;Y1|U) - (I(X;Y1) - I(U;Y1))| at a sample point
  FirstOrderReport first_order;
};

struct SuiteReport {
  SuiteOptions options;
  std::vector<JointResult> joints;

  bool derivatives_ok() const {
    return std::all_of(joints.begin(), joints.end(), [&](const JointResult& j) {
      return j.max_derivative_rel_err <= options.derivative_tolerance;
    });
  }
  bool uy_mu2_ok() const {
    return std::all_of(joints.begin(), joints.end(),
                       [&](const JointResult& j) { return j.max_uy_mu2_fd <= 10.0 * options.h_gradient; });
  }
  bool hessian_ok() const {
    return std::all_of(joints.begin(), joints.end(), [&](const JointResult& j) {
      return j.hessian_rel_err <= options.hessian_tolerance &&
             j.max_gradient <= 10.0 * options.h_hessian * options.h_hessian && j.symmetry_gap <= 1e-8;
    });
  }
  bool first_order_ok() const {
    return std::all_of(joints.begin(), joints.end(),
                       [](const JointResult& j) { return j.first_order.passed(); });
  }
  bool chain_ok() const {
    return std::all_of(joints.begin(), joints.end(), [](const JointResult& j) { return j.chain_gap <= 1e-12; });
  }
  bool passed() const { return derivatives_ok() && uy_mu2_ok() && hessian_ok() && first_order_ok() && chain_ok(); }

  nlohmann::json to_json() const {
    double der = 0.0, uy = 0.0, hess = 0.0, grad = 0.0, sym = 0.0, fo = 0.0, chain = 0.0;
    for (const auto& j : joints) {
      der = std::max(der, j.max_derivative_rel_err);
      uy = std::max(uy, j.max_uy_mu2_fd);
      hess = std::max(hess, j.hessian_rel_err);
      grad = std::max(grad, j.max_gradient);
      sym = std::max(sym, j.symmetry_gap);
      fo = std::max(fo, j.first_order.final_deviation);
      chain = std::max(chain, j.chain_gap);
    }
    const bool mono = std::all_of(joints.begin(), joints.end(),
                                  [](const JointResult& j) { return j.first_order.monotone; });
    return {{"passed", passed()},
            {"joints", joints.size()},
            {"checks",
             {{"first_derivatives", {{"passed", derivatives_ok()}, {"max_rel_err", der}}},
              {"iuy_mu2", {{"passed", uy_mu2_ok()}, {"max_abs_fd", uy}, {"bound", 10.0 * options.h_gradient}}},
              {"hessian",
               {{"passed", hessian_ok()},
                {"max_rel_err", hess},
                {"max_gradient", grad},
                {"max_symmetry_gap", sym}}},
              {"first_order", {{"passed", first_order_ok()}, {"monotone", mono}, {"max_final_deviation", fo}}},
              {"chain_identity", {{"passed", chain_ok()}, {"max_gap", chain}}}}}};
  }
};

inline JointResult check_joint(const BcWardenModel& model, const StructuredJoint& sj, double eta1, double eta2,
                               const SuiteOptions& opt) {
  JointResult r;
  for (int k = 1; k <= 2; ++k) {
    for (auto q : {Quantity::MutualInfoUY, Quantity::MutualInfoXY}) {
      for (auto w : {Weight::Mu1, Weight::Mu2}) {
        const auto c = fd_mi_derivative_check(model, sj, k, q, w, opt.h_gradient);
        if (q == Quantity::MutualInfoUY && w == Weight::Mu2)
          r.max_uy_mu2_fd = std::max(r.max_uy_mu2_fd, std::abs(c.fd_value));
        else
          r.max_derivative_rel_err = std::max(r.max_derivative_rel_err, c.rel_err());
      }
    }
  }
  const auto hess = fd_divergence_hessian_check(model, sj, opt.h_hessian);
  r.hessian_rel_err = hess.max_rel_err();
  r.max_gradient = std::max(std::abs(hess.gradient[0]), std::abs(hess.gradient[1]));
  r.symmetry_gap = hess.symmetry_gap;

  const StructuredJoint mid = sj.at(0.3, 0.4);
  r.chain_gap = std::abs(cmi_xy_given_u(model, mid, 1) - (mi_xy(model, mid, 1) - mi_uy(model, mid, 1)));
  r.first_order = first_order_region_check(model, sj, eta1, eta2, opt.ns);
  return r;
}

/// Runs every check on `opt.joints` random structured joints.
inline SuiteReport run_suite(const BcWardenModel& model, const SuiteOptions& opt = {},
                             std::size_t threads = thread_count()) {
  struct Draw {
    StructuredJoint sj;
    double eta1, eta2;
  };
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> eta(0.5, 2.0);
  std::vector<Draw> draws;
  for (std::size_t i = 0; i < opt.joints; ++i) {
    StructuredJoint sj = random_structured_joint(model, rng);
    const double e1 = eta(rng);
    const double e2 = eta(rng);
    draws.push_back({std::move(sj), e1, e2});
  }
  SuiteReport report;
  report.options = opt;
  report.joints = parallel_map(
      draws.size(), [&](std::size_t i) { return check_joint(model, draws[i].sj, draws[i].eta1, draws[i].eta2, opt); },
      threads);
  return report;
}

}  // namespace covert::taylor
