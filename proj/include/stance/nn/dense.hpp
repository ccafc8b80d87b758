#pragma once

#include <Eigen/Dense>

#include "stance/rng.hpp"
#include "stance/types.hpp"

namespace stance {

template <class S>
struct DenseParams {
  Mat<S> w;  // out x in
  Vec<S> b;

  Eigen::Index in_dim() const { return w.cols(); }
  Eigen::Index out_dim() const { return w.rows(); }

  static DenseParams zero(Eigen::Index out, Eigen::Index in) {
    DenseParams p;
    p.w = Mat<S>::Zero(out, in);
    p.b = Vec<S>::Zero(out);
    return p;
  }

  static DenseParams init(Eigen::Index out, Eigen::Index in, Rng& rng) {
    DenseParams p;
    p.w = glorot_uniform<S>(out, in, rng);
    p.b = Vec<S>::Zero(out);
    return p;
  }

  template <class S2>
  DenseParams<S2> cast() const {
    DenseParams<S2> p;
    p.w = w.template cast<S2>();
    p.b = b.template cast<S2>();
    return p;
  }
};

template <class S>
Vec<S> affine(const DenseParams<S>& p, const Vec<S>& x) {
  return p.w * x + p.b;
}

template <class S>
Vec<S> relu(const Vec<S>& z) {
  return z.cwiseMax(S(0));
}

// Numerically stable softmax: exponents are shifted by the maximum logit.
template <class S>
Vec<S> softmax(const Vec<S>& z) {
  const Vec<S> shifted = (z.array() - z.maxCoeff()).matrix();
  Vec<S> e = shifted.array().exp().matrix();
  return e / e.sum();
}

// Inverted dropout mask: entries are 0 with probability p, else 1/(1-p), so
// the expected activation is unchanged and inference applies no scaling.
template <class S>
Vec<S> dropout_mask(Eigen::Index n, double p, Rng& rng) {
  Vec<S> m(n);
  const S keep_scale = static_cast<S>(1.0 / (1.0 - p));
  for (Eigen::Index k = 0; k < n; ++k) {
    m[k] = rng.uniform() < p ? S(0) : keep_scale;
  }
  return m;
}

}  // namespace stance
