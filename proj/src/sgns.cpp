#include "stance/sgns.hpp"

#include <algorithm>
#include <atomic>
#include <stdexcept>
#include <thread>

#include "stance/error.hpp"

namespace stance {

NoiseDistribution::NoiseDistribution(const Vocabulary& vocab, double power) {
  if (vocab.size() == 0) throw DataError("vocabulary empty");
  cumulative_.resize(static_cast<std::size_t>(vocab.size()));
  double total = 0.0;
  for (int id = 0; id < vocab.size(); ++id) {
    total += std::pow(static_cast<double>(vocab.count(id)), power);
    cumulative_[static_cast<std::size_t>(id)] = total;
  }
  for (double& c : cumulative_) c /= total;
  cumulative_.back() = 1.0;
}

int NoiseDistribution::sample(Rng& rng) const {
  const double u = rng.uniform();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  return static_cast<int>(it - cumulative_.begin());
}

EmbeddingMatrix init_embeddings(int vocab_size, int dim, std::uint64_t seed) {
  if (vocab_size < 1) throw std::invalid_argument("vocab_size must be >= 1");
  if (dim < 1) throw std::invalid_argument("dim must be >= 1");
  EmbeddingMatrix emb;
  emb.input.resize(vocab_size, dim);
  emb.output = TableF::Zero(vocab_size, dim);
  Rng rng(mix_seed(seed, "sgns-init"));
  const double half = 0.5 / static_cast<double>(dim);
  for (Eigen::Index r = 0; r < emb.input.rows(); ++r) {
    for (Eigen::Index c = 0; c < emb.input.cols(); ++c) {
      emb.input(r, c) = static_cast<float>(rng.uniform(-half, half));
    }
  }
  return emb;
}

namespace {

// Positions per sentence after dropping OOV markers.
std::vector<std::vector<int>> strip_oov(
    const std::vector<std::vector<int>>& corpus) {
  std::vector<std::vector<int>> out;
  out.reserve(corpus.size());
  for (const auto& sent : corpus) {
    std::vector<int> kept;
    kept.reserve(sent.size());
    for (int id : sent) {
      if (id >= 0) kept.push_back(id);
    }
    out.push_back(std::move(kept));
  }
  return out;
}

struct TrainShared {
  EmbeddingMatrix* emb;
  const NoiseDistribution* noise;
  const SgnsConfig* cfg;
  const std::vector<std::vector<int>>* sentences;
  std::uint64_t total_steps = 0;
  std::atomic<std::uint64_t> step{0};
};

void train_worker(TrainShared& shared, int worker_id) {
  const SgnsConfig& cfg = *shared.cfg;
  Rng rng(mix_seed(cfg.seed, "sgns-worker-" + std::to_string(worker_id)));
  const float floor_lr = cfg.initial_lr / 10000.0f;
  const auto stride = static_cast<std::size_t>(std::max(1, cfg.workers));
  std::vector<int> negatives;
  negatives.reserve(static_cast<std::size_t>(cfg.negatives));

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (std::size_t s = static_cast<std::size_t>(worker_id);
         s < shared.sentences->size(); s += stride) {
      const std::vector<int>& sent = (*shared.sentences)[s];
      const int len = static_cast<int>(sent.size());
      for (int i = 0; i < len; ++i) {
        const std::uint64_t t = shared.step.fetch_add(1);
        const float lr = std::max(
            floor_lr,
            cfg.initial_lr *
                (1.0f - static_cast<float>(t) /
                            static_cast<float>(shared.total_steps)));
        const int reach = 1 + static_cast<int>(rng.below(
                                  static_cast<std::uint64_t>(cfg.window)));
        const int lo = std::max(0, i - reach);
        const int hi = std::min(len - 1, i + reach);
        for (int j = lo; j <= hi; ++j) {
          if (j == i) continue;
          const int center = sent[i];
          const int context = sent[j];
          negatives.clear();
          for (int k = 0; k < cfg.negatives; ++k) {
            int neg = shared.noise->sample(rng);
            if (neg == context) neg = shared.noise->sample(rng);
            if (neg == context) continue;  // resampled once, then skipped
            negatives.push_back(neg);
          }
          sgns_apply_pair(shared.emb->input, shared.emb->output, center,
                          context, negatives, lr);
        }
      }
    }
  }
}

}  // namespace

EmbeddingMatrix train_skipgram(const std::vector<std::vector<int>>& corpus,
                               const Vocabulary& vocab, const SgnsConfig& cfg) {
  if (corpus.empty()) throw DataError("empty corpus");
  if (vocab.size() < 2) throw DataError("vocabulary size must be >= 2");
  if (cfg.window < 1 || cfg.negatives < 1 || cfg.initial_lr <= 0.0f ||
      cfg.epochs < 0) {
    throw std::invalid_argument("invalid skip-gram configuration");
  }

  EmbeddingMatrix emb = init_embeddings(vocab.size(), cfg.dim, cfg.seed);
  if (cfg.epochs == 0) return emb;

  const auto sentences = strip_oov(corpus);
  std::uint64_t positions = 0;
  for (const auto& sent : sentences) positions += sent.size();
  if (positions == 0) throw DataError("empty corpus");

  NoiseDistribution noise(vocab, cfg.noise_power);
  TrainShared shared;
  shared.emb = &emb;
  shared.noise = &noise;
  shared.cfg = &cfg;
  shared.sentences = &sentences;
  shared.total_steps = positions * static_cast<std::uint64_t>(cfg.epochs);

  if (cfg.workers <= 1) {
    train_worker(shared, 0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(cfg.workers));
    for (int w = 0; w < cfg.workers; ++w) {
      pool.emplace_back([&shared, w] { train_worker(shared, w); });
    }
    for (auto& th : pool) th.join();
  }
  return emb;
}

}  // namespace stance
