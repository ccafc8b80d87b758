#pragma once

#include <vector>

#include <Eigen/Dense>

#include "stance/error.hpp"
#include "stance/rng.hpp"
#include "stance/types.hpp"

namespace stance {

template <class S>
Vec<S> logistic_vec(const Vec<S>& z) {
  return (S(1) / (S(1) + (-z.array()).exp())).matrix();
}

// Uniform Glorot for a weight of shape rows x cols.
template <class S>
Mat<S> glorot_uniform(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  const double limit =
      std::sqrt(6.0 / static_cast<double>(rows + cols));
  Mat<S> w(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) {
      w(r, c) = static_cast<S>(rng.uniform(-limit, limit));
    }
  }
  return w;
}

// Orthogonal square matrix from the QR of a Gaussian draw, with column signs
// fixed by the R diagonal so the result is deterministic.
template <class S>
Mat<S> orthogonal_init(Eigen::Index n, Rng& rng) {
  Mat<S> a(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    for (Eigen::Index r = 0; r < n; ++r) {
      a(r, c) = static_cast<S>(rng.normal());
    }
  }
  Eigen::HouseholderQR<Mat<S>> qr(a);
  Mat<S> q = qr.householderQ() * Mat<S>::Identity(n, n);
  Mat<S> r = qr.matrixQR().template triangularView<Eigen::Upper>();
  for (Eigen::Index c = 0; c < n; ++c) {
    if (r(c, c) < S(0)) q.col(c) = -q.col(c);
  }
  return q;
}

// Forget-gate LSTM parameters (no peepholes). Input weights are H x D,
// recurrent weights H x H.
template <class S>
struct LstmParams {
  Mat<S> w_i, w_f, w_g, w_o;
  Mat<S> u_i, u_f, u_g, u_o;
  Vec<S> b_i, b_f, b_g, b_o;

  Eigen::Index hidden() const { return w_i.rows(); }
  Eigen::Index input_dim() const { return w_i.cols(); }

  static LstmParams zero(Eigen::Index hidden, Eigen::Index input_dim) {
    LstmParams p;
    p.w_i = p.w_f = p.w_g = p.w_o = Mat<S>::Zero(hidden, input_dim);
    p.u_i = p.u_f = p.u_g = p.u_o = Mat<S>::Zero(hidden, hidden);
    p.b_i = p.b_f = p.b_g = p.b_o = Vec<S>::Zero(hidden);
    return p;
  }

  // Glorot input weights, orthogonal recurrent weights, zero biases except
  // the forget bias at 1.
  static LstmParams init(Eigen::Index hidden, Eigen::Index input_dim,
                         Rng& rng) {
    LstmParams p;
    p.w_i = glorot_uniform<S>(hidden, input_dim, rng);
    p.w_f = glorot_uniform<S>(hidden, input_dim, rng);
    p.w_g = glorot_uniform<S>(hidden, input_dim, rng);
    p.w_o = glorot_uniform<S>(hidden, input_dim, rng);
    p.u_i = orthogonal_init<S>(hidden, rng);
    p.u_f = orthogonal_init<S>(hidden, rng);
    p.u_g = orthogonal_init<S>(hidden, rng);
    p.u_o = orthogonal_init<S>(hidden, rng);
    p.b_i = Vec<S>::Zero(hidden);
    p.b_f = Vec<S>::Ones(hidden);
    p.b_g = Vec<S>::Zero(hidden);
    p.b_o = Vec<S>::Zero(hidden);
    return p;
  }

  template <class S2>
  LstmParams<S2> cast() const {
    LstmParams<S2> p;
    p.w_i = w_i.template cast<S2>();
    p.w_f = w_f.template cast<S2>();
    p.w_g = w_g.template cast<S2>();
    p.w_o = w_o.template cast<S2>();
    p.u_i = u_i.template cast<S2>();
    p.u_f = u_f.template cast<S2>();
    p.u_g = u_g.template cast<S2>();
    p.u_o = u_o.template cast<S2>();
    p.b_i = b_i.template cast<S2>();
    p.b_f = b_f.template cast<S2>();
    p.b_g = b_g.template cast<S2>();
    p.b_o = b_o.template cast<S2>();
    return p;
  }
};

// Per-step activations kept for backpropagation. h and c carry the initial
// state at index 0, so step t reads index t-1 and writes index t.
template <class S>
struct LstmCache {
  std::vector<Vec<S>> x, gi, gf, gg, go, tanh_c;
  std::vector<Vec<S>> h, c;
};

// i,f,o = s(.), g = tanh(.), c_t = f*c + i*g, h_t = o*tanh(c_t).
// Returns the terminal hidden state.
template <class S>
Vec<S> lstm_forward(const std::vector<Vec<S>>& inputs, const LstmParams<S>& p,
                    LstmCache<S>* cache = nullptr) {
  if (inputs.empty()) throw DataError("empty sequence");
  const Eigen::Index hidden = p.hidden();
  Vec<S> h = Vec<S>::Zero(hidden);
  Vec<S> c = Vec<S>::Zero(hidden);
  if (cache != nullptr) {
    cache->x = inputs;
    cache->gi.clear();
    cache->gf.clear();
    cache->gg.clear();
    cache->go.clear();
    cache->tanh_c.clear();
    cache->h.assign(1, h);
    cache->c.assign(1, c);
  }
  for (const Vec<S>& x : inputs) {
    const Vec<S> i = logistic_vec<S>(p.w_i * x + p.u_i * h + p.b_i);
    const Vec<S> f = logistic_vec<S>(p.w_f * x + p.u_f * h + p.b_f);
    const Vec<S> g = (p.w_g * x + p.u_g * h + p.b_g).array().tanh().matrix();
    const Vec<S> o = logistic_vec<S>(p.w_o * x + p.u_o * h + p.b_o);
    c = f.cwiseProduct(c) + i.cwiseProduct(g);
    const Vec<S> tc = c.array().tanh().matrix();
    h = o.cwiseProduct(tc);
    if (cache != nullptr) {
      cache->gi.push_back(i);
      cache->gf.push_back(f);
      cache->gg.push_back(g);
      cache->go.push_back(o);
      cache->tanh_c.push_back(tc);
      cache->h.push_back(h);
      cache->c.push_back(c);
    }
  }
  return h;
}

template <class S>
struct LstmBackward {
  LstmParams<S> grads;
  std::vector<Vec<S>> d_inputs;
};

// Backpropagation through time from a gradient on the terminal hidden state.
template <class S>
LstmBackward<S> lstm_backward(const Vec<S>& d_terminal, const LstmParams<S>& p,
                              const LstmCache<S>& cache) {
  const auto steps = static_cast<Eigen::Index>(cache.gi.size());
  LstmBackward<S> out;
  out.grads = LstmParams<S>::zero(p.hidden(), p.input_dim());
  out.d_inputs.assign(static_cast<std::size_t>(steps),
                      Vec<S>::Zero(p.input_dim()));

  Vec<S> dh = d_terminal;
  Vec<S> dc = Vec<S>::Zero(p.hidden());
  for (Eigen::Index t = steps - 1; t >= 0; --t) {
    const auto ti = static_cast<std::size_t>(t);
    const Vec<S>& i = cache.gi[ti];
    const Vec<S>& f = cache.gf[ti];
    const Vec<S>& g = cache.gg[ti];
    const Vec<S>& o = cache.go[ti];
    const Vec<S>& tc = cache.tanh_c[ti];
    const Vec<S>& c_prev = cache.c[ti];
    const Vec<S>& h_prev = cache.h[ti];
    const Vec<S>& x = cache.x[ti];

    const Vec<S> d_o = dh.cwiseProduct(tc);
    dc += dh.cwiseProduct(o).cwiseProduct(
        (S(1) - tc.array().square()).matrix());
    const Vec<S> d_i = dc.cwiseProduct(g);
    const Vec<S> d_g = dc.cwiseProduct(i);
    const Vec<S> d_f = dc.cwiseProduct(c_prev);

    const Vec<S> dz_i =
        d_i.cwiseProduct(i).cwiseProduct((S(1) - i.array()).matrix());
    const Vec<S> dz_f =
        d_f.cwiseProduct(f).cwiseProduct((S(1) - f.array()).matrix());
    const Vec<S> dz_o =
        d_o.cwiseProduct(o).cwiseProduct((S(1) - o.array()).matrix());
    const Vec<S> dz_g =
        d_g.cwiseProduct((S(1) - g.array().square()).matrix());

    out.grads.w_i += dz_i * x.transpose();
    out.grads.w_f += dz_f * x.transpose();
    out.grads.w_g += dz_g * x.transpose();
    out.grads.w_o += dz_o * x.transpose();
    out.grads.u_i += dz_i * h_prev.transpose();
    out.grads.u_f += dz_f * h_prev.transpose();
    out.grads.u_g += dz_g * h_prev.transpose();
    out.grads.u_o += dz_o * h_prev.transpose();
    out.grads.b_i += dz_i;
    out.grads.b_f += dz_f;
    out.grads.b_g += dz_g;
    out.grads.b_o += dz_o;

    out.d_inputs[ti] = p.w_i.transpose() * dz_i + p.w_f.transpose() * dz_f +
                       p.w_g.transpose() * dz_g + p.w_o.transpose() * dz_o;
    dh = p.u_i.transpose() * dz_i + p.u_f.transpose() * dz_f +
         p.u_g.transpose() * dz_g + p.u_o.transpose() * dz_o;
    dc = dc.cwiseProduct(f);
  }
  return out;
}

}  // namespace stance
