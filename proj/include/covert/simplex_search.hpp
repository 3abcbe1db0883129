#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

// Derivative-free local search (Nelder-Mead) plus the exponential-map
// parametrization that turns probability simplices into free coordinates.

namespace covert::search {

/// Probability simplex of dimension k - 1 <-> R^(k-1) via softmax with the
/// last logit pinned at 0.
inline void softmax_into(std::span<const double> logits, std::span<double> out) {
  const std::size_t k = out.size();
  double top = 0.0;
  for (std::size_t i = 0; i + 1 < k; ++i) top = std::max(top, logits[i]);
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    out[i] = std::exp((i + 1 < k ? logits[i] : 0.0) - top);
    sum += out[i];
  }
  for (double& v : out) v /= sum;
}

/// Inverse of softmax_into; entries below `floor` are clamped so that point
/// masses map to finite (large) logits.
inline void logits_from_pmf(std::span<const double> pmf, std::span<double> logits,
                            double floor = 1e-12) {
  const std::size_t k = pmf.size();
  const double last = std::log(std::max(pmf[k - 1], floor));
  for (std::size_t i = 0; i + 1 < k; ++i) logits[i] = std::log(std::max(pmf[i], floor)) - last;
}

inline double logistic(double t) { return 1.0 / (1.0 + std::exp(-t)); }

inline double logit(double p, double floor = 1e-12) {
  p = std::clamp(p, floor, 1.0 - floor);
  return std::log(p / (1.0 - p));
}

struct NelderMeadOptions {
  std::size_t max_evaluations = 4000;
  double x_tolerance = 1e-10;
  double f_tolerance = 1e-14;
  double initial_step = 0.5;
  /// Fresh simplices built around the incumbent after convergence.
  std::size_t restarts = 2;
};

struct SearchResult {
  std::vector<double> x;
  double value = std::numeric_limits<double>::infinity();
  std::size_t evaluations = 0;
};

using Objective = std::function<double(std::span<const double>)>;

/// Minimizes `f` from `start` with the dimension-adaptive coefficients of
/// Gao and Han. Non-finite objective values are treated as +inf.
inline SearchResult nelder_mead(const Objective& f, std::vector<double> start,
                                const NelderMeadOptions& opt = {}) {
  const std::size_t n = start.size();
  SearchResult result;
  auto eval = [&](std::span<const double> x) {
    ++result.evaluations;
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };
  if (n == 0) {
    result.value = eval(start);
    result.x = std::move(start);
    return result;
  }

  const double dn = static_cast<double>(n);
  const double reflect = 1.0;
  const double expand = 1.0 + 2.0 / dn;
  const double contract = 0.75 - 1.0 / (2.0 * dn);
  const double shrink = 1.0 - 1.0 / dn;

  result.x = start;
  result.value = eval(start);

  std::vector<std::vector<double>> pts(n + 1, std::vector<double>(n));
  std::vector<double> vals(n + 1);
  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), xr(n), xe(n), xc(n);

  for (std::size_t round = 0; round <= opt.restarts; ++round) {
    const double before = result.value;
    pts[0] = result.x;
    vals[0] = result.value;
    for (std::size_t i = 0; i < n; ++i) {
      pts[i + 1] = result.x;
      pts[i + 1][i] += opt.initial_step;
      vals[i + 1] = eval(pts[i + 1]);
    }

    while (result.evaluations < opt.max_evaluations) {
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(),
                [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
      const std::size_t best = order.front();
      const std::size_t worst = order.back();
      const std::size_t second = order[n - 1];

      double spread = 0.0;
      for (std::size_t i = 0; i <= n; ++i)
        for (std::size_t d = 0; d < n; ++d)
          spread = std::max(spread, std::abs(pts[i][d] - pts[best][d]));
      const double fspread = vals[worst] - vals[best];
      if (spread <= opt.x_tolerance && (fspread <= opt.f_tolerance || !std::isfinite(fspread))) break;
      if (spread <= opt.x_tolerance * 1e-3) break;

      std::fill(centroid.begin(), centroid.end(), 0.0);
      for (std::size_t i = 0; i <= n; ++i) {
        if (i == worst) continue;
        for (std::size_t d = 0; d < n; ++d) centroid[d] += pts[i][d] / dn;
      }
      for (std::size_t d = 0; d < n; ++d)
        xr[d] = centroid[d] + reflect * (centroid[d] - pts[worst][d]);
      const double fr = eval(xr);

      if (fr < vals[best]) {
        for (std::size_t d = 0; d < n; ++d)
          xe[d] = centroid[d] + expand * (xr[d] - centroid[d]);
        const double fe = eval(xe);
        if (fe < fr) {
          pts[worst] = xe;
          vals[worst] = fe;
        } else {
          pts[worst] = xr;
          vals[worst] = fr;
        }
        continue;
      }
      if (fr < vals[second]) {
        pts[worst] = xr;
        vals[worst] = fr;
        continue;
      }
      const bool outside = fr < vals[worst];
      for (std::size_t d = 0; d < n; ++d) {
        xc[d] = outside ? centroid[d] + contract * (xr[d] - centroid[d])
                        : centroid[d] - contract * (centroid[d] - pts[worst][d]);
      }
      const double fc = eval(xc);
      if (fc < (outside ? fr : vals[worst])) {
        pts[worst] = xc;
        vals[worst] = fc;
        continue;
      }
      for (std::size_t i = 0; i <= n; ++i) {
        if (i == best) continue;
        for (std::size_t d = 0; d < n; ++d)
          pts[i][d] = pts[best][d] + shrink * (pts[i][d] - pts[best][d]);
        vals[i] = eval(pts[i]);
      }
    }

    const auto best_it = std::min_element(vals.begin(), vals.end());
    if (*best_it < result.value) {
      result.value = *best_it;
      result.x = pts[static_cast<std::size_t>(best_it - vals.begin())];
    }
    if (result.evaluations >= opt.max_evaluations) break;
    if (round > 0 && !(result.value < before - opt.f_tolerance)) break;
  }
  return result;
}

/// Maximizes a unimodal function on [lo, hi] by golden-section search.
inline std::pair<double, double> golden_section_max(const std::function<double(double)>& f,
                                                    double lo, double hi,
                                                    double tolerance = 1e-12) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tolerance) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  double best_t = lo, best_v = f(lo);
  for (double t : {a, b, hi, 0.5 * (a + b)}) {
    const double v = f(t);
    if (v > best_v) {
      best_v = v;
      best_t = t;
    }
  }
  return {best_t, best_v};
}

}  // namespace covert::search
