#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "covert/channel_model.hpp"
#include "covert/error.hpp"

namespace covert {

/// One-parameter model family: P2 = P1 * W(t), with each entry of W either a
/// constant, the parameter `t`, or `1-t`.
///
/// JSON: {"x0": 0, "P1": [[..]], "Q": [[..]],
///        "post_channel": {"parameter": "c", "rows": [[0.9, 0.1], ["c", "1-c"]]},
///        "values": [0.0, 0.1, ...]}
class ModelFamily {
 public:
  struct Entry {
    enum class Kind { Constant, Param, OneMinusParam };
    Kind kind = Kind::Constant;
    double value = 0.0;

    double at(double t) const {
      switch (kind) {
        case Kind::Param: return t;
        case Kind::OneMinusParam: return 1.0 - t;
        case Kind::Constant: break;
      }
      return value;
    }
  };

  ModelFamily(Channel p1, Channel q, std::size_t x0, std::string parameter,
              std::vector<std::vector<Entry>> post, std::vector<double> values)
      : p1_(std::move(p1)), q_(std::move(q)), x0_(x0), parameter_(std::move(parameter)),
        post_(std::move(post)), values_(std::move(values)) {
    if (post_.size() != p1_.outputs()) {
      throw ModelError(ModelError::Kind::Dimension,
                       "post_channel needs one row per P1 output (" + std::to_string(p1_.outputs()) + ")");
    }
  }

  const std::string& parameter() const noexcept { return parameter_; }
  const std::vector<double>& values() const noexcept { return values_; }

  Channel post_channel(double t) const {
    std::vector<std::vector<double>> rows;
    for (const auto& r : post_) {
      std::vector<double> row;
      for (const auto& e : r) row.push_back(e.at(t));
      rows.push_back(std::move(row));
    }
    try {
      return Channel(rows);
    } catch (const ModelError& e) {
      throw ModelError(e.kind(), "post_channel at " + parameter_ + "=" + std::to_string(t) + ": " + e.what());
    }
  }

  BcWardenModel at(double t) const {
    return BcWardenModel(p1_, p1_.then(post_channel(t)), q_, x0_);
  }

 private:
  Channel p1_, q_;
  std::size_t x0_;
  std::string parameter_;
  std::vector<std::vector<Entry>> post_;
  std::vector<double> values_;
};

inline ModelFamily family_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ModelError(ModelError::Kind::Parse, "family must be a JSON object");
  if (!j.contains("x0") || !j.at("x0").is_number_integer() || j.at("x0").get<long long>() < 0) {
    throw ModelError(ModelError::Kind::Parse, "'x0' must be a nonnegative integer");
  }
  if (!j.contains("post_channel") || !j.at("post_channel").is_object()) {
    throw ModelError(ModelError::Kind::Parse, "missing object 'post_channel'");
  }
  const auto& pc = j.at("post_channel");
  const std::string name = pc.value("parameter", std::string("c"));
  if (!pc.contains("rows") || !pc.at("rows").is_array()) {
    throw ModelError(ModelError::Kind::Parse, "'post_channel.rows' must be an array");
  }
  std::vector<std::vector<ModelFamily::Entry>> post;
  for (const auto& r : pc.at("rows")) {
    if (!r.is_array()) throw ModelError(ModelError::Kind::Parse, "post_channel rows must be arrays");
    std::vector<ModelFamily::Entry> row;
    for (const auto& v : r) {
      if (v.is_number()) {
        row.push_back({ModelFamily::Entry::Kind::Constant, v.get<double>()});
      } else if (v.is_string() && v.get<std::string>() == name) {
        row.push_back({ModelFamily::Entry::Kind::Param});
      } else if (v.is_string() && v.get<std::string>() == "1-" + name) {
        row.push_back({ModelFamily::Entry::Kind::OneMinusParam});
      } else {
        throw ModelError(ModelError::Kind::Parse,
                         "post_channel entry must be a number, \"" + name + "\" or \"1-" + name + "\"");
      }
    }
    post.push_back(std::move(row));
  }
  std::vector<double> values;
  if (j.contains("values")) {
    if (!j.at("values").is_array()) throw ModelError(ModelError::Kind::Parse, "'values' must be an array");
    for (const auto& v : j.at("values")) {
      if (!v.is_number()) throw ModelError(ModelError::Kind::Parse, "'values' has a non-number");
      values.push_back(v.get<double>());
    }
  }
  return ModelFamily(channel_from_json(j, "P1"), channel_from_json(j, "Q"), j.at("x0").get<std::size_t>(),
                     name, std::move(post), std::move(values));
}

inline ModelFamily load_family(const std::string& path) { return family_from_json(read_json_file(path)); }

}  // namespace covert
