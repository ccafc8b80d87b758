#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "stance/types.hpp"

namespace stance {

// Class-weighted negative log likelihood of the gold class, with the
// probability clamped below at 1e-12.
template <class S>
S weighted_cross_entropy(const Vec<S>& probs, int gold, S weight) {
  const S p = std::max(probs[gold], static_cast<S>(1e-12));
  return -weight * std::log(p);
}

// Gradient with respect to the logits feeding the softmax.
template <class S>
Vec<S> weighted_cross_entropy_dlogits(const Vec<S>& probs, int gold,
                                      S weight) {
  Vec<S> d = weight * probs;
  d[gold] -= weight;
  return d;
}

// Inverse-frequency class weights: N / (classes * max(1, count_c)).
template <class S>
Vec<S> inverse_frequency_weights(const std::vector<long>& counts) {
  const auto classes = static_cast<Eigen::Index>(counts.size());
  long total = 0;
  for (long c : counts) total += c;
  Vec<S> w(classes);
  for (Eigen::Index k = 0; k < classes; ++k) {
    const long denom = std::max<long>(1, counts[static_cast<std::size_t>(k)]);
    w[k] = static_cast<S>(static_cast<double>(total) /
                          (static_cast<double>(classes) *
                           static_cast<double>(denom)));
  }
  return w;
}

}  // namespace stance
