#pragma once

#include <exception>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "covert/covert_rates.hpp"
#include "covert/model_family.hpp"
#include "covert/region_optimizer.hpp"

namespace covert {

struct SweepRow {
  double param = 0.0;
  std::optional<bool> condition_bit;
  std::optional<double> gamma_star;
  double l1_star = 0.0;
  double l2_star = 0.0;
  double sup_ratio = 0.0;
  std::string diagnostic;  // set when a single-user capacity vanished
  std::string error;       // set when the row could not be evaluated

  nlohmann::json to_json() const {
    nlohmann::json j = {{"param", param}, {"l1_star", l1_star}, {"l2_star", l2_star}};
    j["condition_bit"] = condition_bit ? nlohmann::json(*condition_bit ? 1 : 0) : nlohmann::json();
    j["gamma_star"] = gamma_star ? nlohmann::json(*gamma_star) : nlohmann::json();
    // JSON has no infinity; an unbounded ratio is written as null.
    j["sup_ratio"] = std::isfinite(sup_ratio) ? nlohmann::json(sup_ratio) : nlohmann::json();
    if (!diagnostic.empty()) j["diagnostic"] = diagnostic;
    if (!error.empty()) j["error"] = error;
    return j;
  }
};

/// Time-sharing optimality bit and gamma* of one model.
///
/// A vanishing single-user capacity makes the region a segment on one axis:
/// time-sharing is then trivially optimal and gamma* is recorded as 1.
inline SweepRow sweep_row(const BcWardenModel& model, double param, const OptimizerConfig& config) {
  SweepRow row;
  row.param = param;
  try {
    const RegionContext ctx(model);
    row.l1_star = ctx.user1.value;
    row.l2_star = ctx.user2.value;
    const auto ts = ts_optimality_condition(model, row.l1_star, row.l2_star);
    row.sup_ratio = ts.sup_ratio;
    row.condition_bit = ts.holds;
    try {
      row.gamma_star = gamma_star(ctx, config).gamma;
    } catch (const ZeroCapacity& e) {
      row.gamma_star = 1.0;
      row.diagnostic = e.what();
    }
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

/// Evaluates every parameter value; failures are recorded per row.
inline std::vector<SweepRow> sweep(const ModelFamily& family, const std::vector<double>& values,
                                   const OptimizerConfig& config) {
  std::vector<SweepRow> rows;
  for (double t : values) {
    try {
      rows.push_back(sweep_row(family.at(t), t, config));
    } catch (const std::exception& e) {
      SweepRow row;
      row.param = t;
      row.error = e.what();
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace covert
