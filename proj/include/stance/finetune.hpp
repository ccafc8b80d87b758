#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "stance/embeddings.hpp"
#include "stance/folds.hpp"
#include "stance/labels.hpp"
#include "stance/nn/seqnet.hpp"
#include "stance/pretrain.hpp"
#include "stance/stance_data.hpp"

namespace stance {

enum class InitSource { kPretrained, kRandomRnn, kRandomAll };

const char* init_source_name(InitSource init);
InitSource init_source_from_name(const std::string& name);

struct FineTuneConfig {
  double lr = 0.015;
  double momentum = 0.9;
  int epochs = 50;
  int folds = 5;
  double dropout = 0.9;
  InitSource init = InitSource::kPretrained;
  std::uint64_t seed = 1;
  int batch_size = 32;
  int lstm_hidden = 128;
  int dense_hidden = 128;
  int workers = 1;
};

// Sources for the embedding and recurrent layers, by init mode:
// pretrained uses the tuned encoder; random-rnn keeps the skip-gram
// projection but draws a fresh LSTM; random-all draws everything.
struct EncoderInit {
  const PretrainedEncoder* pretrained = nullptr;
  const EmbeddingMatrix* skipgram = nullptr;
  Eigen::Index vocab = 0;  // random-all fallback shape
  Eigen::Index dim = 0;
};

struct TopicMember {
  SeqNet<float> net;
  int best_epoch = 0;
  double best_val_loss = 0.0;
  std::vector<double> val_losses;   // index = epoch, 0 is the initialization
  std::vector<int> val_indices;     // held-out example indices
  std::vector<int> val_predictions; // from the best-epoch parameters
};

struct TopicModel {
  std::string topic;
  std::vector<TopicMember> members;
  FoldAssignment folds;
  std::array<long, kNumStanceClasses> train_counts{};
};

// Trains one fold ensemble: shuffle into `folds` chunks, each member trains
// on the others with SGD-momentum on class-weighted cross entropy and keeps
// the parameters of its best-validation-loss epoch.
TopicModel train_topic(const std::string& topic,
                       const std::vector<StanceExample>& examples,
                       const EncoderInit& init, const FineTuneConfig& config);

struct Prediction {
  int label = kNone;
  std::vector<VecF> member_probs;
};

// Majority vote over member argmaxes; ties go to the largest summed member
// probability among the tied labels, then to class-id order.
Prediction predict(const TopicModel& model, const std::vector<int>& ids);

// Per-example cross-validation predictions: entry i is the prediction for
// example i from the member that held it out.
std::vector<int> cv_predictions(const TopicModel& model, std::size_t n);

// Directory layout: fold<k>.ckpt for each member plus model.json carrying
// topic, config, fold record, and provenance.
void save_topic_model(const std::string& dir, const TopicModel& model,
                      const FineTuneConfig& config,
                      const std::string& provenance);
TopicModel load_topic_model(const std::string& dir);

}  // namespace stance
