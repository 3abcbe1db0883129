#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "covert/error.hpp"

namespace covert::lp {

/// Dense equality system A x = b, x >= 0 (A is rows x cols, row-major).
struct EqualitySystem {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> a;
  std::vector<double> b;

  EqualitySystem(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0), b(r, 0.0) {}

  double& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

struct FeasibilityResult {
  bool feasible = false;
  /// Phase-1 optimum: sum of artificial variables (L1 residual of A x = b).
  double infeasibility = 0.0;
  std::vector<double> x;
  std::size_t pivots = 0;
};

/// Phase-1 simplex with Bland's rule. Feasible iff the artificial sum can be
/// driven to <= tolerance.
inline FeasibilityResult find_feasible_point(const EqualitySystem& sys, double tolerance = 1e-9) {
  const std::size_t m = sys.rows;
  const std::size_t n = sys.cols;
  const std::size_t width = n + m + 1;  // originals, artificials, rhs
  constexpr double kPivotEps = 1e-12;

  std::vector<double> t(m * width, 0.0);
  auto cell = [&](std::size_t i, std::size_t j) -> double& { return t[i * width + j]; };
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double sign = sys.b[i] < 0.0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < n; ++j) cell(i, j) = sign * sys.at(i, j);
    cell(i, n + i) = 1.0;
    cell(i, width - 1) = sign * sys.b[i];
    basis[i] = n + i;
  }
  // Reduced costs of min sum(artificials), expressed over nonbasic columns.
  std::vector<double> cost(width, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) cost[j] -= cell(i, j);
  for (std::size_t i = 0; i < m; ++i) cost[width - 1] -= cell(i, width - 1);

  FeasibilityResult result;
  const std::size_t max_pivots = 50 * (n + m) + 100;
  while (result.pivots < max_pivots) {
    std::size_t enter = width;
    for (std::size_t j = 0; j + 1 < width; ++j) {
      if (cost[j] < -kPivotEps) {
        enter = j;
        break;
      }
    }
    if (enter == width) break;

    std::size_t leave = m;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
      const double coef = cell(i, enter);
      if (coef <= kPivotEps) continue;
      const double ratio = cell(i, width - 1) / coef;
      if (ratio < best_ratio - kPivotEps ||
          (std::abs(ratio - best_ratio) <= kPivotEps && leave < m && basis[i] < basis[leave])) {
        best_ratio = ratio;
        leave = i;
      }
    }
    if (leave == m) break;  // unbounded direction; cannot occur for phase 1

    const double pivot = cell(leave, enter);
    for (std::size_t j = 0; j < width; ++j) cell(leave, j) /= pivot;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == leave) continue;
      const double f = cell(i, enter);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < width; ++j) cell(i, j) -= f * cell(leave, j);
    }
    const double f = cost[enter];
    for (std::size_t j = 0; j < width; ++j) cost[j] -= f * cell(leave, j);
    basis[leave] = enter;
    ++result.pivots;
  }

  result.x.assign(n, 0.0);
  double artificial_sum = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double v = cell(i, width - 1);
    if (basis[i] < n) {
      result.x[basis[i]] = v > 0.0 ? v : 0.0;
    } else {
      artificial_sum += std::abs(v);
    }
  }
  result.infeasibility = artificial_sum;
  result.feasible = artificial_sum <= tolerance;
  return result;
}

}  // namespace covert::lp
