#pragma once

#include <string>
#include <vector>

#include "stance/error.hpp"
#include "stance/nn/checkpoint.hpp"
#include "stance/nn/dense.hpp"
#include "stance/nn/loss.hpp"
#include "stance/nn/lstm.hpp"
#include "stance/nn/optim.hpp"
#include "stance/rng.hpp"
#include "stance/types.hpp"
#include "stance/vocabulary.hpp"

namespace stance {

struct SeqNetShape {
  Eigen::Index vocab = 0;
  Eigen::Index dim = 0;
  Eigen::Index lstm_hidden = 0;
  Eigen::Index dense_hidden = 0;  // 0 disables the ReLU stage
  Eigen::Index classes = 0;
};

template <class S>
struct SeqNetCache {
  std::vector<int> ids;
  LstmCache<S> lstm;
  Vec<S> terminal;
  Vec<S> dense_pre;
  Vec<S> relu_out;
  Vec<S> mask;  // empty when dropout was not applied
  Vec<S> feat;
  Vec<S> probs;
};

template <class S>
struct SeqNetGrads;

// Sequence classifier: token embedding -> LSTM -> optional dense ReLU with
// inverted dropout -> softmax. The OOV vector is frozen (no gradient) and
// pad ids embed to zero.
template <class S>
struct SeqNet {
  RowTable<S> emb;
  Vec<S> oov;
  LstmParams<S> lstm;
  DenseParams<S> dense;
  DenseParams<S> out;
  bool has_dense = false;
  double dropout = 0.0;

  Eigen::Index vocab_size() const { return emb.rows(); }
  Eigen::Index dim() const { return emb.cols(); }

  SeqNetShape shape() const {
    return SeqNetShape{emb.rows(), emb.cols(), lstm.hidden(),
                       has_dense ? dense.out_dim() : 0, out.out_dim()};
  }

  static SeqNet make(const SeqNetShape& sh, double dropout, Rng& rng) {
    SeqNet net;
    net.emb.resize(sh.vocab, sh.dim);
    const double bound = 0.5 / static_cast<double>(sh.dim);
    for (Eigen::Index r = 0; r < sh.vocab; ++r) {
      for (Eigen::Index c = 0; c < sh.dim; ++c) {
        net.emb(r, c) = static_cast<S>(rng.uniform(-bound, bound));
      }
    }
    net.oov = net.emb.colwise().mean().transpose();
    net.lstm = LstmParams<S>::init(sh.lstm_hidden, sh.dim, rng);
    net.has_dense = sh.dense_hidden > 0;
    if (net.has_dense) {
      net.dense = DenseParams<S>::init(sh.dense_hidden, sh.lstm_hidden, rng);
      net.out = DenseParams<S>::init(sh.classes, sh.dense_hidden, rng);
    } else {
      net.dense = DenseParams<S>::zero(0, 0);
      net.out = DenseParams<S>::init(sh.classes, sh.lstm_hidden, rng);
    }
    net.dropout = dropout;
    return net;
  }

  Vec<S> token_vector(int id) const {
    if (id == kPadId) return Vec<S>::Zero(dim());
    if (id == kOovId) return oov;
    return emb.row(id).transpose();
  }

  // Forward pass. With train=true and dropout>0 a mask is drawn from rng and
  // recorded in the cache; inference applies no mask.
  Vec<S> forward(const std::vector<int>& ids, bool train, Rng* rng,
                 SeqNetCache<S>* cache = nullptr) const {
    if (ids.empty()) throw DataError("empty sequence");
    std::vector<Vec<S>> inputs;
    inputs.reserve(ids.size());
    for (int id : ids) inputs.push_back(token_vector(id));
    LstmCache<S> lstm_cache;
    const Vec<S> h =
        lstm_forward<S>(inputs, lstm, cache != nullptr ? &lstm_cache : nullptr);
    Vec<S> feat = h;
    Vec<S> dense_pre, relu_out, mask;
    if (has_dense) {
      dense_pre = affine<S>(dense, h);
      relu_out = relu<S>(dense_pre);
      feat = relu_out;
      if (train && dropout > 0.0) {
        if (rng == nullptr) throw DataError("dropout requires an rng");
        mask = dropout_mask<S>(relu_out.size(), dropout, *rng);
        feat = relu_out.cwiseProduct(mask);
      }
    }
    const Vec<S> probs = softmax<S>(affine<S>(out, feat));
    if (cache != nullptr) {
      cache->ids = ids;
      cache->lstm = std::move(lstm_cache);
      cache->terminal = h;
      cache->dense_pre = dense_pre;
      cache->relu_out = relu_out;
      cache->mask = mask;
      cache->feat = feat;
      cache->probs = probs;
    }
    return probs;
  }

  // Weighted cross-entropy loss for one example; gradients are accumulated
  // into acc (which must match this net's shape).
  S example_loss(const std::vector<int>& ids, int gold, S weight, bool train,
                 Rng* rng, SeqNetGrads<S>& acc) const {
    SeqNetCache<S> cache;
    const Vec<S> probs = forward(ids, train, rng, &cache);
    const S loss = weighted_cross_entropy<S>(probs, gold, weight);
    const Vec<S> dlogits = weighted_cross_entropy_dlogits<S>(probs, gold, weight);
    backward(cache, dlogits, acc);
    return loss;
  }

  void backward(const SeqNetCache<S>& cache, const Vec<S>& dlogits,
                SeqNetGrads<S>& acc) const {
    acc.out.w += dlogits * cache.feat.transpose();
    acc.out.b += dlogits;
    Vec<S> d_feat = out.w.transpose() * dlogits;
    Vec<S> d_h;
    if (has_dense) {
      if (cache.mask.size() > 0) d_feat = d_feat.cwiseProduct(cache.mask);
      const Vec<S> d_pre =
          (d_feat.array() * (cache.dense_pre.array() > S(0)).template cast<S>())
              .matrix();
      acc.dense.w += d_pre * cache.terminal.transpose();
      acc.dense.b += d_pre;
      d_h = dense.w.transpose() * d_pre;
    } else {
      d_h = d_feat;
    }
    LstmBackward<S> back = lstm_backward<S>(d_h, lstm, cache.lstm);
    add_lstm(acc.lstm, back.grads);
    for (std::size_t t = 0; t < cache.ids.size(); ++t) {
      const int id = cache.ids[t];
      if (id >= 0) acc.emb.row(id) += back.d_inputs[t].transpose();
    }
  }

  template <class S2>
  SeqNet<S2> cast() const {
    SeqNet<S2> net;
    net.emb = emb.template cast<S2>();
    net.oov = oov.template cast<S2>();
    net.lstm = lstm.template cast<S2>();
    net.dense = dense.template cast<S2>();
    net.out = out.template cast<S2>();
    net.has_dense = has_dense;
    net.dropout = dropout;
    return net;
  }

  static void add_lstm(LstmParams<S>& a, const LstmParams<S>& b) {
    a.w_i += b.w_i;
    a.w_f += b.w_f;
    a.w_g += b.w_g;
    a.w_o += b.w_o;
    a.u_i += b.u_i;
    a.u_f += b.u_f;
    a.u_g += b.u_g;
    a.u_o += b.u_o;
    a.b_i += b.b_i;
    a.b_f += b.b_f;
    a.b_g += b.b_g;
    a.b_o += b.b_o;
  }
};

template <class S>
struct SeqNetGrads {
  RowTable<S> emb;
  LstmParams<S> lstm;
  DenseParams<S> dense;
  DenseParams<S> out;

  static SeqNetGrads zero_like(const SeqNet<S>& net) {
    SeqNetGrads g;
    g.emb = RowTable<S>::Zero(net.emb.rows(), net.emb.cols());
    g.lstm = LstmParams<S>::zero(net.lstm.hidden(), net.lstm.input_dim());
    g.dense = DenseParams<S>::zero(net.dense.out_dim(), net.dense.in_dim());
    g.out = DenseParams<S>::zero(net.out.out_dim(), net.out.in_dim());
    return g;
  }

  void set_zero() {
    emb.setZero();
    lstm = LstmParams<S>::zero(lstm.hidden(), lstm.input_dim());
    dense.w.setZero();
    dense.b.setZero();
    out.w.setZero();
    out.b.setZero();
  }

  void scale(S factor) {
    emb *= factor;
    lstm.w_i *= factor;
    lstm.w_f *= factor;
    lstm.w_g *= factor;
    lstm.w_o *= factor;
    lstm.u_i *= factor;
    lstm.u_f *= factor;
    lstm.u_g *= factor;
    lstm.u_o *= factor;
    lstm.b_i *= factor;
    lstm.b_f *= factor;
    lstm.b_g *= factor;
    lstm.b_o *= factor;
    dense.w *= factor;
    dense.b *= factor;
    out.w *= factor;
    out.b *= factor;
  }
};

// Applies fn to the net tensor and the same-named tensor of each mirror
// (gradients or optimizer state), walking trainable tensors in a fixed order.
// The frozen OOV vector is not visited.
template <class S, class Fn, class... Mirrors>
void zip_tensors(SeqNet<S>& net, Fn&& fn, Mirrors&... mirrors) {
  fn(net.emb, mirrors.emb...);
  fn(net.lstm.w_i, mirrors.lstm.w_i...);
  fn(net.lstm.w_f, mirrors.lstm.w_f...);
  fn(net.lstm.w_g, mirrors.lstm.w_g...);
  fn(net.lstm.w_o, mirrors.lstm.w_o...);
  fn(net.lstm.u_i, mirrors.lstm.u_i...);
  fn(net.lstm.u_f, mirrors.lstm.u_f...);
  fn(net.lstm.u_g, mirrors.lstm.u_g...);
  fn(net.lstm.u_o, mirrors.lstm.u_o...);
  fn(net.lstm.b_i, mirrors.lstm.b_i...);
  fn(net.lstm.b_f, mirrors.lstm.b_f...);
  fn(net.lstm.b_g, mirrors.lstm.b_g...);
  fn(net.lstm.b_o, mirrors.lstm.b_o...);
  if (net.has_dense) {
    fn(net.dense.w, mirrors.dense.w...);
    fn(net.dense.b, mirrors.dense.b...);
  }
  fn(net.out.w, mirrors.out.w...);
  fn(net.out.b, mirrors.out.b...);
}

template <class S>
void sgd_step_net(SeqNet<S>& net, SeqNetGrads<S>& grads,
                  SeqNetGrads<S>& velocity, double lr, double mu) {
  zip_tensors(
      net,
      [&](auto& theta, auto& grad, auto& vel) {
        sgd_momentum_step(theta, grad, vel, lr, mu);
      },
      grads, velocity);
}

template <class S>
void adadelta_step_net(SeqNet<S>& net, SeqNetGrads<S>& grads,
                       SeqNetGrads<S>& sq_grad, SeqNetGrads<S>& sq_update,
                       double rho, double eps) {
  zip_tensors(
      net,
      [&](auto& theta, auto& grad, auto& sg, auto& su) {
        adadelta_step(theta, grad, sg, su, rho, eps);
      },
      grads, sq_grad, sq_update);
}

template <class S>
Eigen::Index seqnet_param_count(const SeqNet<S>& net) {
  SeqNet<S> copy = net;
  Eigen::Index n = 0;
  zip_tensors(copy, [&](auto& t) { n += t.size(); });
  return n;
}

template <class S>
VecD seqnet_flatten(const SeqNet<S>& net) {
  SeqNet<S> copy = net;
  VecD flat(seqnet_param_count(net));
  Eigen::Index k = 0;
  zip_tensors(copy, [&](auto& t) {
    for (Eigen::Index i = 0; i < t.size(); ++i) {
      flat[k++] = static_cast<double>(*(t.data() + i));
    }
  });
  return flat;
}

template <class S>
void seqnet_set_params(SeqNet<S>& net, const VecD& flat) {
  Eigen::Index k = 0;
  zip_tensors(net, [&](auto& t) {
    for (Eigen::Index i = 0; i < t.size(); ++i) {
      *(t.data() + i) = static_cast<S>(flat[k++]);
    }
  });
  if (k != flat.size()) throw std::invalid_argument("parameter size mismatch");
}

template <class S>
VecD seqnet_flatten_grads(const SeqNet<S>& net, const SeqNetGrads<S>& grads) {
  SeqNet<S> copy = net;
  SeqNetGrads<S> g = grads;
  VecD flat(seqnet_param_count(net));
  Eigen::Index k = 0;
  zip_tensors(
      copy,
      [&](auto&, auto& grad) {
        for (Eigen::Index i = 0; i < grad.size(); ++i) {
          flat[k++] = static_cast<double>(*(grad.data() + i));
        }
      },
      g);
  return flat;
}

inline std::vector<NamedTensor> seqnet_to_tensors(const SeqNet<float>& net) {
  std::vector<NamedTensor> ts;
  ts.push_back(tensor_from("emb", net.emb));
  ts.push_back(tensor_from("oov", net.oov));
  ts.push_back(tensor_from("lstm.w_i", net.lstm.w_i));
  ts.push_back(tensor_from("lstm.w_f", net.lstm.w_f));
  ts.push_back(tensor_from("lstm.w_g", net.lstm.w_g));
  ts.push_back(tensor_from("lstm.w_o", net.lstm.w_o));
  ts.push_back(tensor_from("lstm.u_i", net.lstm.u_i));
  ts.push_back(tensor_from("lstm.u_f", net.lstm.u_f));
  ts.push_back(tensor_from("lstm.u_g", net.lstm.u_g));
  ts.push_back(tensor_from("lstm.u_o", net.lstm.u_o));
  ts.push_back(tensor_from("lstm.b_i", net.lstm.b_i));
  ts.push_back(tensor_from("lstm.b_f", net.lstm.b_f));
  ts.push_back(tensor_from("lstm.b_g", net.lstm.b_g));
  ts.push_back(tensor_from("lstm.b_o", net.lstm.b_o));
  if (net.has_dense) {
    ts.push_back(tensor_from("dense.w", net.dense.w));
    ts.push_back(tensor_from("dense.b", net.dense.b));
  }
  ts.push_back(tensor_from("out.w", net.out.w));
  ts.push_back(tensor_from("out.b", net.out.b));
  return ts;
}

inline SeqNet<float> seqnet_from_tensors(const std::vector<NamedTensor>& ts,
                                         double dropout) {
  SeqNet<float> net;
  net.emb = tensor_to_table(find_tensor(ts, "emb"));
  net.oov = tensor_to_vector(find_tensor(ts, "oov"));
  net.lstm.w_i = tensor_to_matrix(find_tensor(ts, "lstm.w_i"));
  net.lstm.w_f = tensor_to_matrix(find_tensor(ts, "lstm.w_f"));
  net.lstm.w_g = tensor_to_matrix(find_tensor(ts, "lstm.w_g"));
  net.lstm.w_o = tensor_to_matrix(find_tensor(ts, "lstm.w_o"));
  net.lstm.u_i = tensor_to_matrix(find_tensor(ts, "lstm.u_i"));
  net.lstm.u_f = tensor_to_matrix(find_tensor(ts, "lstm.u_f"));
  net.lstm.u_g = tensor_to_matrix(find_tensor(ts, "lstm.u_g"));
  net.lstm.u_o = tensor_to_matrix(find_tensor(ts, "lstm.u_o"));
  net.lstm.b_i = tensor_to_vector(find_tensor(ts, "lstm.b_i"));
  net.lstm.b_f = tensor_to_vector(find_tensor(ts, "lstm.b_f"));
  net.lstm.b_g = tensor_to_vector(find_tensor(ts, "lstm.b_g"));
  net.lstm.b_o = tensor_to_vector(find_tensor(ts, "lstm.b_o"));
  net.has_dense = false;
  for (const NamedTensor& t : ts) {
    if (t.name == "dense.w") net.has_dense = true;
  }
  if (net.has_dense) {
    net.dense.w = tensor_to_matrix(find_tensor(ts, "dense.w"));
    net.dense.b = tensor_to_vector(find_tensor(ts, "dense.b"));
  } else {
    net.dense = DenseParams<float>::zero(0, 0);
  }
  net.out.w = tensor_to_matrix(find_tensor(ts, "out.w"));
  net.out.b = tensor_to_vector(find_tensor(ts, "out.b"));
  net.dropout = dropout;
  return net;
}

// Central-difference check of the full network gradient for one example.
// Dropout makes the training-mode loss non-deterministic, so only inference
// mode is checkable.
double seqnet_gradient_check(const SeqNet<double>& net,
                             const std::vector<int>& ids, int gold,
                             double weight, bool train_mode = false,
                             double eps = 1e-5);

}  // namespace stance
