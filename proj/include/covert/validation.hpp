#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "covert/channel_model.hpp"
#include "covert/lp_feasibility.hpp"

namespace covert {

/// Tolerance on the phase-1 residual when deciding linear feasibility.
inline constexpr double kFeasibilityTolerance = 1e-9;

struct ConditionViolation {
  std::string condition;  // "a", "b", "c_user1", "c_user2"
  std::size_t input = 0;
  std::optional<std::size_t> output;
};

struct ConditionsReport {
  bool cond_a = false;  // Q0 outside the convex hull of the other warden rows
  bool cond_b = false;  // every warden row is absolutely continuous w.r.t. Q0
  bool cond_c_user1 = false;
  bool cond_c_user2 = false;
  std::vector<ConditionViolation> violations;

  bool all() const noexcept { return cond_a && cond_b && cond_c_user1 && cond_c_user2; }
};

struct DegradationCertificate {
  std::optional<Channel> w;  // empty when infeasible
  double residual = 0.0;     // max |P1 W - P2|, or the phase-1 residual if infeasible

  bool feasible() const noexcept { return w.has_value(); }
};

/// Is `target` a convex combination of the given rows (within tolerance)?
inline bool in_convex_hull(std::span<const double> target,
                           const std::vector<std::span<const double>>& rows,
                           double tolerance = kFeasibilityTolerance) {
  if (rows.empty()) return false;
  const std::size_t dim = target.size();
  lp::EqualitySystem sys(dim + 1, rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    for (std::size_t z = 0; z < dim; ++z) sys.at(z, k) = rows[k][z];
    sys.at(dim, k) = 1.0;
  }
  for (std::size_t z = 0; z < dim; ++z) sys.b[z] = target[z];
  sys.b[dim] = 1.0;
  return lp::find_feasible_point(sys, tolerance).feasible;
}

namespace detail {

// Records (x, y) pairs where row x has mass outside the support of `reference`.
inline bool check_support(const Channel& ch, std::span<const double> reference,
                          const std::string& name, std::vector<ConditionViolation>& out) {
  bool ok = true;
  for (std::size_t x = 0; x < ch.inputs(); ++x) {
    const auto row = ch.row(x);
    for (std::size_t y = 0; y < row.size(); ++y) {
      if (row[y] > 0.0 && reference[y] == 0.0) {
        ok = false;
        out.push_back({name, x, y});
      }
    }
  }
  return ok;
}

}  // namespace detail

/// Non-redundancy of x0 at the warden and absolute continuity at warden and users.
inline ConditionsReport check_conditions(const BcWardenModel& model) {
  ConditionsReport report;
  const std::size_t x0 = model.x0();

  std::vector<std::span<const double>> others;
  for (std::size_t x = 0; x < model.inputs(); ++x)
    if (x != x0) others.push_back(model.q().row(x));
  report.cond_a = !in_convex_hull(model.q().row(x0), others);
  if (!report.cond_a) report.violations.push_back({"a", x0, std::nullopt});

  report.cond_b = detail::check_support(model.q(), model.q().row(x0), "b", report.violations);
  report.cond_c_user1 =
      detail::check_support(model.p1(), model.p1().row(x0), "c_user1", report.violations);
  report.cond_c_user2 =
      detail::check_support(model.p2(), model.p2().row(x0), "c_user2", report.violations);
  return report;
}

/// Searches W >= 0, W 1 = 1 with P1 W = P2.
inline DegradationCertificate find_degrading_channel(const Channel& p1, const Channel& p2) {
  if (p1.inputs() != p2.inputs()) {
    throw ModelError(ModelError::Kind::Dimension, "degradation check needs a common input alphabet");
  }
  const std::size_t nx = p1.inputs();
  const std::size_t n1 = p1.outputs();
  const std::size_t n2 = p2.outputs();
  // Variable W(i, j) lives at column i * n2 + j.
  lp::EqualitySystem sys(nx * n2 + n1, n1 * n2);
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t j = 0; j < n2; ++j) {
      const std::size_t r = x * n2 + j;
      for (std::size_t i = 0; i < n1; ++i) sys.at(r, i * n2 + j) = p1(x, i);
      sys.b[r] = p2(x, j);
    }
  }
  for (std::size_t i = 0; i < n1; ++i) {
    const std::size_t r = nx * n2 + i;
    for (std::size_t j = 0; j < n2; ++j) sys.at(r, i * n2 + j) = 1.0;
    sys.b[r] = 1.0;
  }

  const auto sol = lp::find_feasible_point(sys, kFeasibilityTolerance);
  DegradationCertificate cert;
  if (!sol.feasible) {
    cert.residual = sol.infeasibility;
    return cert;
  }

  std::vector<std::vector<double>> w(n1, std::vector<double>(n2, 0.0));
  for (std::size_t i = 0; i < n1; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < n2; ++j) sum += w[i][j] = std::max(0.0, sol.x[i * n2 + j]);
    for (double& v : w[i]) v /= sum;
  }
  Channel wc(w);
  double residual = 0.0;
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t j = 0; j < n2; ++j) {
      double v = 0.0;
      for (std::size_t i = 0; i < n1; ++i) v += p1(x, i) * wc(i, j);
      residual = std::max(residual, std::abs(v - p2(x, j)));
    }
  }
  cert.residual = residual;
  if (residual <= 1e-8) cert.w = std::move(wc);
  return cert;
}

}  // namespace covert
