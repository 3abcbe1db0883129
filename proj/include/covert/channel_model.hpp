#pragma once

#include <cmath>
#include <cstddef>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "covert/error.hpp"

namespace covert {

/// Row-sum tolerance accepted at construction time.
inline constexpr double kRowSumTolerance = 1e-9;

namespace detail {

// Renormalizes in place unless the sum already equals 1 to machine precision,
// which keeps construction idempotent (save/load reproduces every bit).
inline void normalize_pmf(std::span<double> p, const std::string& what) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!std::isfinite(p[i]) || p[i] < 0.0) {
      throw ModelError(ModelError::Kind::Range,
                       what + ": entry " + std::to_string(i) + " is negative or not finite");
    }
  }
  const double sum = std::accumulate(p.begin(), p.end(), 0.0);
  const double deviation = sum - 1.0;
  if (std::abs(deviation) > kRowSumTolerance) {
    std::ostringstream os;
    os << what << ": sums to " << sum << " (deviation " << deviation << ")";
    throw ModelError(ModelError::Kind::RowSum, os.str());
  }
  if (std::abs(deviation) > static_cast<double>(p.size() + 4) * std::numeric_limits<double>::epsilon()) {
    for (double& v : p) v /= sum;
  }
}

}  // namespace detail

/// A probability mass function over the index set 0..k-1.
class Distribution {
 public:
  Distribution() = default;

  /// Validates (nonnegative, sums to 1 within 1e-9) and renormalizes.
  explicit Distribution(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.empty()) throw ModelError(ModelError::Kind::Dimension, "empty distribution");
    detail::normalize_pmf(probs_, "distribution");
  }

  Distribution(std::initializer_list<double> probs) : Distribution(std::vector<double>(probs)) {}

  static Distribution point_mass(std::size_t size, std::size_t index) {
    std::vector<double> p(size, 0.0);
    p.at(index) = 1.0;
    return Distribution(std::move(p));
  }

  static Distribution uniform(std::size_t size) {
    return Distribution(std::vector<double>(size, 1.0 / static_cast<double>(size)));
  }

  std::size_t size() const noexcept { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  std::span<const double> probs() const noexcept { return probs_; }
  operator std::span<const double>() const noexcept { return probs_; }
  const std::vector<double>& vector() const noexcept { return probs_; }

  auto begin() const noexcept { return probs_.begin(); }
  auto end() const noexcept { return probs_.end(); }

  friend bool operator==(const Distribution&, const Distribution&) = default;

 private:
  std::vector<double> probs_;
};

/// Row-stochastic matrix: one conditional pmf per input symbol.
class Channel {
 public:
  Channel() = default;

  explicit Channel(const std::vector<std::vector<double>>& rows) {
    if (rows.empty() || rows.front().empty()) {
      throw ModelError(ModelError::Kind::Dimension, "channel needs at least one row and column");
    }
    rows_ = rows.size();
    cols_ = rows.front().size();
    data_.reserve(rows_ * cols_);
    for (std::size_t r = 0; r < rows_; ++r) {
      if (rows[r].size() != cols_) {
        throw ModelError(ModelError::Kind::Dimension,
                         "row " + std::to_string(r) + " has " + std::to_string(rows[r].size()) +
                             " entries, expected " + std::to_string(cols_));
      }
      data_.insert(data_.end(), rows[r].begin(), rows[r].end());
      detail::normalize_pmf(std::span<double>(data_).subspan(r * cols_, cols_),
                            "row " + std::to_string(r));
    }
  }

  Channel(std::initializer_list<std::initializer_list<double>> rows)
      : Channel(std::vector<std::vector<double>>(rows.begin(), rows.end())) {}

  static Channel identity(std::size_t n) {
    std::vector<std::vector<double>> rows(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) rows[i][i] = 1.0;
    return Channel(rows);
  }

  std::size_t inputs() const noexcept { return rows_; }
  std::size_t outputs() const noexcept { return cols_; }

  std::span<const double> row(std::size_t x) const {
    return std::span<const double>(data_).subspan(x * cols_, cols_);
  }
  double operator()(std::size_t x, std::size_t y) const { return data_[x * cols_ + y]; }

  std::vector<std::vector<double>> rows() const {
    std::vector<std::vector<double>> out;
    out.reserve(rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
      auto s = row(r);
      out.emplace_back(s.begin(), s.end());
    }
    return out;
  }

  /// Matrix product this * other (cascade of two channels).
  Channel then(const Channel& other) const {
    if (cols_ != other.rows_) {
      throw ModelError(ModelError::Kind::Dimension, "channel cascade dimension mismatch");
    }
    std::vector<std::vector<double>> out(rows_, std::vector<double>(other.cols_, 0.0));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k)
        for (std::size_t j = 0; j < other.cols_; ++j) out[i][j] += (*this)(i, k) * other(k, j);
    return Channel(out);
  }

  friend bool operator==(const Channel&, const Channel&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Degraded broadcast channel with a warden: user channels p1, p2, warden
/// channel q, and the zero symbol x0 sent when nothing is communicated.
class BcWardenModel {
 public:
  BcWardenModel(Channel p1, Channel p2, Channel q, std::size_t x0)
      : p1_(std::move(p1)), p2_(std::move(p2)), q_(std::move(q)), x0_(x0) {
    if (p1_.inputs() != p2_.inputs() || p1_.inputs() != q_.inputs()) {
      throw ModelError(ModelError::Kind::Dimension,
                       "P1, P2 and Q must share the input alphabet (" +
                           std::to_string(p1_.inputs()) + ", " + std::to_string(p2_.inputs()) +
                           ", " + std::to_string(q_.inputs()) + ")");
    }
    if (x0_ >= p1_.inputs()) {
      throw ModelError(ModelError::Kind::Range, "x0 = " + std::to_string(x0_) +
                                                    " is not an input index");
    }
  }

  const Channel& p1() const noexcept { return p1_; }
  const Channel& p2() const noexcept { return p2_; }
  const Channel& q() const noexcept { return q_; }
  const Channel& user(int k) const { return k == 1 ? p1_ : p2_; }
  std::size_t x0() const noexcept { return x0_; }
  std::size_t inputs() const noexcept { return p1_.inputs(); }

  const nlohmann::json& labels() const noexcept { return labels_; }
  void set_labels(nlohmann::json labels) { labels_ = std::move(labels); }

 private:
  Channel p1_, p2_, q_;
  std::size_t x0_;
  nlohmann::json labels_;
};

/// Q0: the warden's output law when x0 is sent.
inline Distribution warden_null_distribution(const BcWardenModel& model) {
  auto r = model.q().row(model.x0());
  return Distribution(std::vector<double>(r.begin(), r.end()));
}

// JSON model schema: {"x0": int, "P1": [[..]], "P2": [[..]], "Q": [[..]], "labels": {...}?}

inline Channel channel_from_json(const nlohmann::json& j, const std::string& key) {
  if (!j.contains(key)) throw ModelError(ModelError::Kind::Parse, "missing key '" + key + "'");
  const auto& m = j.at(key);
  if (!m.is_array()) throw ModelError(ModelError::Kind::Parse, "'" + key + "' must be an array");
  std::vector<std::vector<double>> rows;
  for (const auto& r : m) {
    if (!r.is_array()) throw ModelError(ModelError::Kind::Parse, "'" + key + "' rows must be arrays");
    std::vector<double> row;
    for (const auto& v : r) {
      if (!v.is_number()) throw ModelError(ModelError::Kind::Parse, "'" + key + "' has a non-number");
      row.push_back(v.get<double>());
    }
    rows.push_back(std::move(row));
  }
  try {
    return Channel(rows);
  } catch (const ModelError& e) {
    throw ModelError(e.kind(), key + ": " + e.what());
  }
}

inline BcWardenModel model_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ModelError(ModelError::Kind::Parse, "model must be a JSON object");
  if (!j.contains("x0") || !j.at("x0").is_number_integer() || j.at("x0").get<long long>() < 0) {
    throw ModelError(ModelError::Kind::Parse, "'x0' must be a nonnegative integer");
  }
  BcWardenModel model(channel_from_json(j, "P1"), channel_from_json(j, "P2"),
                      channel_from_json(j, "Q"), j.at("x0").get<std::size_t>());
  if (j.contains("labels")) model.set_labels(j.at("labels"));
  return model;
}

inline nlohmann::json model_to_json(const BcWardenModel& model) {
  nlohmann::json j;
  j["x0"] = model.x0();
  j["P1"] = model.p1().rows();
  j["P2"] = model.p2().rows();
  j["Q"] = model.q().rows();
  if (!model.labels().is_null()) j["labels"] = model.labels();
  return j;
}

inline nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError(ModelError::Kind::Parse, "cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ModelError(ModelError::Kind::Parse, path + ": " + e.what());
  }
}

inline BcWardenModel load_model(const std::string& path) {
  return model_from_json(read_json_file(path));
}

inline void save_model(const BcWardenModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << model_to_json(model).dump(2) << '\n';
}

}  // namespace covert
