#pragma once

#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "covert/covert.hpp"
#include "oracles.hpp"

namespace fixtures {

inline std::string data_path(const std::string& name) { return std::string(COVERT_DATA_DIR) + "/" + name; }

inline const oracle::Mat kP1 = {{0.2, 0.28, 0.28, 0.24}, {0.05, 0.1, 0.45, 0.4}, {0.07, 0.37, 0.4, 0.16}};
inline const oracle::Mat kP2 = {{0.1884, 0.324, 0.232, 0.2556},
                                {0.0515, 0.215, 0.331, 0.4025},
                                {0.0744, 0.399, 0.326, 0.2006}};
inline const oracle::Mat kQ = {{0.20, 0.19, 0.36, 0.25}, {0.01, 0.37, 0.17, 0.45}, {0.42, 0.35, 0.05, 0.18}};
inline const oracle::Mat kW = {
    {0.9, 0.1, 0, 0}, {0.02, 0.8, 0.12, 0.06}, {0.01, 0.2, 0.7, 0.09}, {0, 0.1, 0.01, 0.89}};

inline covert::BcWardenModel example1() {
  return covert::BcWardenModel(covert::Channel(kP1), covert::Channel(kP2), covert::Channel(kQ), 0);
}

/// Binary example: P1 = BSC(0.2), Q = BSC(0.4), P2 = P1 * [[0.9, 0.1], [c, 1-c]].
inline covert::BcWardenModel example2(double c) {
  const covert::Channel p1{{0.8, 0.2}, {0.2, 0.8}};
  const covert::Channel w{{0.9, 0.1}, {c, 1.0 - c}};
  return covert::BcWardenModel(p1, p1.then(w), covert::Channel{{0.6, 0.4}, {0.4, 0.6}}, 0);
}

/// Random degraded model with strictly positive channels satisfying every
/// standing condition (resampled until x0 is non-redundant at the warden).
inline covert::BcWardenModel random_degraded_model(std::mt19937_64& rng, std::size_t nx, std::size_t ny1,
                                                   std::size_t ny2, std::size_t nz) {
  for (;;) {
    const auto p1 = oracle::random_channel(rng, nx, ny1);
    const auto w = oracle::random_channel(rng, ny1, ny2);
    const auto q = oracle::random_channel(rng, nx, nz);
    covert::BcWardenModel m(covert::Channel(p1), covert::Channel(oracle::multiply(p1, w)), covert::Channel(q), 0);
    if (covert::check_conditions(m).all()) return m;
  }
}

}  // namespace fixtures
