#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stance/embeddings.hpp"
#include "stance/hashtag_corpus.hpp"
#include "stance/nn/seqnet.hpp"

namespace stance {

struct PretrainConfig {
  int lstm_hidden = 128;
  int max_epochs = 50;
  int patience = 3;
  int batch_size = 32;
  double rho = 0.95;
  double eps = 1e-6;
  std::uint64_t seed = 1;
};

// Embedding and LSTM parameters tuned on hashtag prediction, plus the frozen
// OOV vector and the candidate tags the softmax head was trained against.
struct PretrainedEncoder {
  TableF emb;
  VecF oov;
  LstmParams<float> lstm;
  std::vector<std::string> tags;
  std::string mode;
  double dev_accuracy = 0.0;
  int best_epoch = 0;  // 0 means the untrained initialization
  std::vector<double> dev_history;  // index = epoch
};

// Trains embedding -> LSTM -> softmax(|tags|) with AdaDelta on the train
// split, recording dev accuracy after each epoch, and returns the parameters
// from the best epoch (early stopping with the configured patience).
PretrainedEncoder pretrain_encoder(const HashtagCorpus& corpus,
                                   const EmbeddingMatrix& init_emb,
                                   const HashtagCandidateSet& candidates,
                                   const PretrainConfig& config);

// Checkpoint (emb, oov, lstm tensors) plus a JSON sidecar with tags, mode,
// dev accuracy, and shapes.
void save_encoder(const std::string& ckpt_path, const std::string& json_path,
                  const PretrainedEncoder& encoder);
PretrainedEncoder load_encoder(const std::string& ckpt_path,
                               const std::string& json_path);

}  // namespace stance
