#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "covert/channel_model.hpp"
#include "covert/error.hpp"

// Information functionals in nats. Every function takes plain spans so that
// Distribution, Channel rows and scratch buffers can be passed alike.

namespace covert {

using Nats = double;

namespace detail {

inline void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw ModelError(ModelError::Kind::Dimension, std::string(what) + ": sizes " +
                                                      std::to_string(a) + " and " +
                                                      std::to_string(b) + " differ");
  }
}

}  // namespace detail

/// D(p||q) = sum p ln(p/q), with 0 ln(0/q) = 0.
inline Nats kl_divergence(std::span<const double> p, std::span<const double> q) {
  detail::require_same_size(p.size(), q.size(), "kl_divergence");
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    if (q[i] == 0.0) throw SupportError(SupportError::Kind::AbsoluteContinuity, i);
    sum += p[i] * std::log(p[i] / q[i]);
  }
  // Rounding can leave a tiny negative value when p == q.
  return sum > 0.0 ? sum : 0.0;
}

/// chi2(p||q) = sum (p - q)^2 / q.
inline double chi2_distance(std::span<const double> p, std::span<const double> q) {
  detail::require_same_size(p.size(), q.size(), "chi2_distance");
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = p[i] - q[i];
    if (d == 0.0) continue;
    if (q[i] == 0.0) throw SupportError(SupportError::Kind::DivisionSupport, i);
    sum += d * d / q[i];
  }
  return sum;
}

/// sum (pa - q)(pb - q) / q. Bilinear; may be negative.
inline double cross_chi2(std::span<const double> pa, std::span<const double> pb,
                         std::span<const double> q) {
  detail::require_same_size(pa.size(), q.size(), "cross_chi2");
  detail::require_same_size(pb.size(), q.size(), "cross_chi2");
  double sum = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double da = pa[i] - q[i];
    const double db = pb[i] - q[i];
    if (da == 0.0 || db == 0.0) continue;
    if (q[i] == 0.0) throw SupportError(SupportError::Kind::DivisionSupport, i);
    sum += da * db / q[i];
  }
  return sum;
}

/// px * ch written into out (no normalization check).
inline void output_into(std::span<const double> px, const Channel& ch, std::span<double> out) {
  detail::require_same_size(px.size(), ch.inputs(), "output_distribution");
  detail::require_same_size(out.size(), ch.outputs(), "output_distribution");
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t x = 0; x < px.size(); ++x) {
    if (px[x] == 0.0) continue;
    const auto row = ch.row(x);
    for (std::size_t y = 0; y < out.size(); ++y) out[y] += px[x] * row[y];
  }
}

inline std::vector<double> output_vector(std::span<const double> px, const Channel& ch) {
  std::vector<double> out(ch.outputs());
  output_into(px, ch, out);
  return out;
}

/// Law of the channel output induced by input law px.
inline Distribution output_distribution(std::span<const double> px, const Channel& ch) {
  return Distribution(output_vector(px, ch));
}

/// I(X;Y) = sum_x px(x) D(ch(.|x) || px*ch).
inline Nats mutual_information(std::span<const double> px, const Channel& ch) {
  const auto py = output_vector(px, ch);
  double sum = 0.0;
  for (std::size_t x = 0; x < px.size(); ++x) {
    if (px[x] == 0.0) continue;
    sum += px[x] * kl_divergence(ch.row(x), py);
  }
  return sum > 0.0 ? sum : 0.0;
}

/// I(X;Y|U) = sum_u pu(u) I(X;Y | U=u), rows of px_given_u indexed by u.
inline Nats conditional_mutual_information(std::span<const double> pu, const Channel& px_given_u,
                                           const Channel& ch) {
  detail::require_same_size(pu.size(), px_given_u.inputs(), "conditional_mutual_information");
  detail::require_same_size(px_given_u.outputs(), ch.inputs(), "conditional_mutual_information");
  double sum = 0.0;
  for (std::size_t u = 0; u < pu.size(); ++u) {
    if (pu[u] == 0.0) continue;
    sum += pu[u] * mutual_information(px_given_u.row(u), ch);
  }
  return sum;
}

}  // namespace covert
