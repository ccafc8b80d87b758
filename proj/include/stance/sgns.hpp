#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "stance/embeddings.hpp"
#include "stance/rng.hpp"
#include "stance/types.hpp"
#include "stance/vocabulary.hpp"

namespace stance {

struct SgnsConfig {
  int dim = 256;
  int window = 10;
  int negatives = 15;
  int epochs = 5;
  float initial_lr = 0.025f;
  double noise_power = 0.75;
  std::uint64_t seed = 1;
  int workers = 1;  // >1 trades bit-reproducibility for throughput
};

// Cumulative sampling table proportional to count^power over vocabulary ids.
class NoiseDistribution {
 public:
  NoiseDistribution(const Vocabulary& vocab, double power);

  int sample(Rng& rng) const;
  const std::vector<double>& cumulative() const { return cumulative_; }
  double probability(int id) const {
    const auto i = static_cast<std::size_t>(id);
    return i == 0 ? cumulative_[0] : cumulative_[i] - cumulative_[i - 1];
  }

 private:
  std::vector<double> cumulative_;
};

template <class S>
S logistic(S x) {
  return S(1) / (S(1) + std::exp(-x));
}

// Loss of one positive pair against fixed negatives:
//   -log s(u_ctx . v_cen) - sum_k log s(-u_k . v_cen)
template <class S>
S sgns_pair_loss(const RowTable<S>& input, const RowTable<S>& output,
                 int center, int context, const std::vector<int>& negatives) {
  const S pos = input.row(center).dot(output.row(context));
  S loss = -std::log(logistic(pos));
  for (int neg : negatives) {
    loss -= std::log(logistic(-input.row(center).dot(output.row(neg))));
  }
  return loss;
}

template <class S>
struct SgnsPairGrads {
  Vec<S> d_center;
  Vec<S> d_context;
  std::vector<Vec<S>> d_negatives;  // aligned with the negatives list
};

template <class S>
SgnsPairGrads<S> sgns_pair_grads(const RowTable<S>& input,
                                 const RowTable<S>& output, int center,
                                 int context,
                                 const std::vector<int>& negatives) {
  SgnsPairGrads<S> g;
  const auto v = input.row(center);
  const S pos = logistic(v.dot(output.row(context)));
  g.d_context = (pos - S(1)) * v.transpose();
  g.d_center = (pos - S(1)) * output.row(context).transpose();
  g.d_negatives.reserve(negatives.size());
  for (int neg : negatives) {
    const S p = logistic(v.dot(output.row(neg)));
    g.d_negatives.push_back(p * v.transpose());
    g.d_center += p * output.row(neg).transpose();
  }
  return g;
}

// One gradient step on the pair: output rows of the context and negatives
// plus the center's input row, all at the pre-step values.
template <class S>
void sgns_apply_pair(RowTable<S>& input, RowTable<S>& output, int center,
                     int context, const std::vector<int>& negatives, S lr) {
  const auto g = sgns_pair_grads(input, output, center, context, negatives);
  output.row(context) -= lr * g.d_context.transpose();
  for (std::size_t k = 0; k < negatives.size(); ++k) {
    output.row(negatives[k]) -= lr * g.d_negatives[k].transpose();
  }
  input.row(center) -= lr * g.d_center.transpose();
}

// Input rows uniform in [-0.5/dim, 0.5/dim], output rows zero.
EmbeddingMatrix init_embeddings(int vocab_size, int dim, std::uint64_t seed);

// Skip-gram with negative sampling over encoded sequences (OOV entries are
// skipped). Deterministic for workers == 1.
EmbeddingMatrix train_skipgram(const std::vector<std::vector<int>>& corpus,
                               const Vocabulary& vocab, const SgnsConfig& cfg);

}  // namespace stance
