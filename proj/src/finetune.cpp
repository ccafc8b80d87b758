#include "stance/finetune.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <set>
#include <thread>

#include "stance/error.hpp"
#include "stance/nn/checkpoint.hpp"
#include "stance/rng.hpp"

#include <nlohmann/json.hpp>

namespace stance {

const char* init_source_name(InitSource init) {
  switch (init) {
    case InitSource::kPretrained:
      return "pretrained";
    case InitSource::kRandomRnn:
      return "random-rnn";
    case InitSource::kRandomAll:
      return "random-all";
  }
  throw DataError("invalid init source");
}

InitSource init_source_from_name(const std::string& name) {
  if (name == "pretrained") return InitSource::kPretrained;
  if (name == "random-rnn") return InitSource::kRandomRnn;
  if (name == "random-all") return InitSource::kRandomAll;
  throw DataError("unknown init source: " + name);
}

namespace {

SeqNet<float> build_member_net(const EncoderInit& init,
                               const FineTuneConfig& config, Rng& rng) {
  SeqNet<float> net;
  Eigen::Index vocab = init.vocab;
  Eigen::Index dim = init.dim;
  if (init.skipgram != nullptr) {
    vocab = init.skipgram->input.rows();
    dim = init.skipgram->input.cols();
  }
  if (config.init == InitSource::kPretrained) {
    if (init.pretrained == nullptr) {
      throw DataError("pretrained init requires an encoder");
    }
    net.emb = init.pretrained->emb;
    net.oov = init.pretrained->oov;
    net.lstm = init.pretrained->lstm;
    if (net.lstm.hidden() != config.lstm_hidden) {
      throw DataError("encoder LSTM size does not match configuration");
    }
  } else if (config.init == InitSource::kRandomRnn) {
    if (init.skipgram == nullptr) {
      throw DataError("random-rnn init requires skip-gram embeddings");
    }
    net.emb = init.skipgram->input;
    net.oov = oov_vector(*init.skipgram);
    net.lstm = LstmParams<float>::init(config.lstm_hidden, dim, rng);
  } else {
    if (vocab < 1 || dim < 1) {
      throw DataError("random-all init requires vocabulary and dimension");
    }
    net.emb.resize(vocab, dim);
    const double bound = 0.5 / static_cast<double>(dim);
    for (Eigen::Index r = 0; r < vocab; ++r) {
      for (Eigen::Index c = 0; c < dim; ++c) {
        net.emb(r, c) = static_cast<float>(rng.uniform(-bound, bound));
      }
    }
    net.oov = net.emb.colwise().mean().transpose();
    net.lstm = LstmParams<float>::init(config.lstm_hidden, dim, rng);
  }
  net.dense =
      DenseParams<float>::init(config.dense_hidden, config.lstm_hidden, rng);
  net.out = DenseParams<float>::init(kNumStanceClasses, config.dense_hidden,
                                     rng);
  net.has_dense = true;
  net.dropout = config.dropout;
  return net;
}

double validation_loss(const SeqNet<float>& net,
                       const std::vector<StanceExample>& examples,
                       const std::vector<int>& indices, const VecF& weights) {
  double total = 0.0;
  for (int idx : indices) {
    const StanceExample& ex = examples[static_cast<std::size_t>(idx)];
    const VecF probs = net.forward(ex.ids, false, nullptr);
    total += static_cast<double>(
        weighted_cross_entropy<float>(probs, ex.gold, weights[ex.gold]));
  }
  return total / static_cast<double>(indices.size());
}

TopicMember train_fold(const std::string& topic,
                       const std::vector<StanceExample>& examples,
                       const EncoderInit& init, const FineTuneConfig& config,
                       const FoldAssignment& folds, int fold) {
  const std::string fold_tag = "fold-" + std::to_string(fold);
  Rng rng(mix_seed(config.seed, ("finetune-" + fold_tag).c_str()));
  SeqNet<float> net = build_member_net(init, config, rng);

  TopicMember member;
  member.val_indices = folds.validation[static_cast<std::size_t>(fold)];
  std::vector<int> train_idx = folds.training_for(fold);

  std::vector<long> counts(kNumStanceClasses, 0);
  for (int idx : train_idx) {
    ++counts[static_cast<std::size_t>(
        examples[static_cast<std::size_t>(idx)].gold)];
  }
  const VecF weights = class_weights(counts);

  SeqNet<float> best = net;
  member.best_val_loss =
      validation_loss(net, examples, member.val_indices, weights);
  member.best_epoch = 0;
  member.val_losses.push_back(member.best_val_loss);

  SeqNetGrads<float> grads = SeqNetGrads<float>::zero_like(net);
  SeqNetGrads<float> velocity = SeqNetGrads<float>::zero_like(net);
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    rng.shuffle(train_idx);
    std::size_t cursor = 0;
    while (cursor < train_idx.size()) {
      const std::size_t batch_end =
          std::min(train_idx.size(),
                   cursor + static_cast<std::size_t>(config.batch_size));
      grads.set_zero();
      float batch_loss = 0.0f;
      for (std::size_t k = cursor; k < batch_end; ++k) {
        const StanceExample& ex =
            examples[static_cast<std::size_t>(train_idx[k])];
        batch_loss += net.example_loss(ex.ids, ex.gold, weights[ex.gold],
                                       true, &rng, grads);
      }
      if (!std::isfinite(batch_loss)) {
        throw DataError(topic + " " + fold_tag + " diverged");
      }
      grads.scale(1.0f / static_cast<float>(batch_end - cursor));
      sgd_step_net(net, grads, velocity, config.lr, config.momentum);
      cursor = batch_end;
    }
    const double val =
        validation_loss(net, examples, member.val_indices, weights);
    if (!std::isfinite(val)) {
      throw DataError(topic + " " + fold_tag + " diverged");
    }
    member.val_losses.push_back(val);
    if (val < member.best_val_loss) {
      member.best_val_loss = val;
      member.best_epoch = epoch;
      best = net;
    }
  }

  member.net = std::move(best);
  member.val_predictions.reserve(member.val_indices.size());
  for (int idx : member.val_indices) {
    const VecF probs = member.net.forward(
        examples[static_cast<std::size_t>(idx)].ids, false, nullptr);
    Eigen::Index arg = 0;
    probs.maxCoeff(&arg);
    member.val_predictions.push_back(static_cast<int>(arg));
  }
  return member;
}

}  // namespace

TopicModel train_topic(const std::string& topic,
                       const std::vector<StanceExample>& examples,
                       const EncoderInit& init, const FineTuneConfig& config) {
  if (config.folds < 2) throw DataError("need at least 2 folds");
  if (config.lr <= 0.0) throw DataError("learning rate must be positive");
  if (config.epochs < 0 || config.batch_size < 1 || config.lstm_hidden < 1 ||
      config.dense_hidden < 1 || config.dropout < 0.0 ||
      config.dropout >= 1.0) {
    throw DataError("invalid fine-tune configuration");
  }
  std::set<int> distinct;
  for (const StanceExample& ex : examples) distinct.insert(ex.gold);
  if (distinct.size() < 2) {
    throw DataError(topic + ": examples span fewer than 2 classes");
  }

  TopicModel model;
  model.topic = topic;
  model.folds = make_folds(static_cast<int>(examples.size()), config.folds,
                           mix_seed(config.seed, "finetune-folds"));
  for (const StanceExample& ex : examples) {
    ++model.train_counts[static_cast<std::size_t>(ex.gold)];
  }

  model.members.resize(static_cast<std::size_t>(config.folds));
  const int workers = std::max(1, std::min(config.workers, config.folds));
  if (workers == 1) {
    for (int f = 0; f < config.folds; ++f) {
      model.members[static_cast<std::size_t>(f)] =
          train_fold(topic, examples, init, config, model.folds, f);
    }
  } else {
    std::atomic<int> next{0};
    std::vector<std::string> errors(
        static_cast<std::size_t>(config.folds));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        while (true) {
          const int f = next.fetch_add(1);
          if (f >= config.folds) return;
          try {
            model.members[static_cast<std::size_t>(f)] =
                train_fold(topic, examples, init, config, model.folds, f);
          } catch (const std::exception& e) {
            errors[static_cast<std::size_t>(f)] = e.what();
          }
        }
      });
    }
    for (std::thread& t : pool) t.join();
    for (const std::string& err : errors) {
      if (!err.empty()) throw DataError(err);
    }
  }
  return model;
}

Prediction predict(const TopicModel& model, const std::vector<int>& ids) {
  if (ids.empty()) throw DataError("empty sequence");
  Prediction pred;
  std::array<int, kNumStanceClasses> votes{};
  std::array<double, kNumStanceClasses> prob_sums{};
  for (const TopicMember& member : model.members) {
    const VecF probs = member.net.forward(ids, false, nullptr);
    Eigen::Index arg = 0;
    probs.maxCoeff(&arg);
    ++votes[static_cast<std::size_t>(arg)];
    for (int c = 0; c < kNumStanceClasses; ++c) {
      prob_sums[static_cast<std::size_t>(c)] += static_cast<double>(probs[c]);
    }
    pred.member_probs.push_back(probs);
  }
  int best = 0;
  for (int c = 1; c < kNumStanceClasses; ++c) {
    const auto ci = static_cast<std::size_t>(c);
    const auto bi = static_cast<std::size_t>(best);
    if (votes[ci] > votes[bi] ||
        (votes[ci] == votes[bi] && prob_sums[ci] > prob_sums[bi])) {
      best = c;
    }
  }
  pred.label = best;
  return pred;
}

std::vector<int> cv_predictions(const TopicModel& model, std::size_t n) {
  std::vector<int> preds(n, -1);
  for (const TopicMember& member : model.members) {
    for (std::size_t k = 0; k < member.val_indices.size(); ++k) {
      preds[static_cast<std::size_t>(member.val_indices[k])] =
          member.val_predictions[k];
    }
  }
  for (int p : preds) {
    if (p < 0) throw DataError("validation chunks do not cover the examples");
  }
  return preds;
}

void save_topic_model(const std::string& dir, const TopicModel& model,
                      const FineTuneConfig& config,
                      const std::string& provenance) {
  std::filesystem::create_directories(dir);
  nlohmann::json j;
  j["topic"] = model.topic;
  j["provenance"] = provenance;
  j["config"] = {{"lr", config.lr},
                 {"momentum", config.momentum},
                 {"epochs", config.epochs},
                 {"folds", config.folds},
                 {"dropout", config.dropout},
                 {"init", init_source_name(config.init)},
                 {"seed", config.seed},
                 {"batch_size", config.batch_size},
                 {"lstm_hidden", config.lstm_hidden},
                 {"dense_hidden", config.dense_hidden}};
  j["train_counts"] = model.train_counts;
  j["members"] = nlohmann::json::array();
  for (std::size_t f = 0; f < model.members.size(); ++f) {
    const TopicMember& m = model.members[f];
    const std::string ckpt = "fold" + std::to_string(f) + ".ckpt";
    save_checkpoint(dir + "/" + ckpt, seqnet_to_tensors(m.net));
    nlohmann::json mj;
    mj["checkpoint"] = ckpt;
    mj["best_epoch"] = m.best_epoch;
    mj["best_val_loss"] = m.best_val_loss;
    mj["val_losses"] = m.val_losses;
    mj["val_indices"] = m.val_indices;
    mj["val_predictions"] = m.val_predictions;
    j["members"].push_back(mj);
  }
  std::ofstream out(dir + "/model.json", std::ios::trunc);
  if (!out) throw DataError("cannot write: " + dir + "/model.json");
  out << j.dump(2) << "\n";
  if (!out) throw DataError("cannot write: " + dir + "/model.json");
}

TopicModel load_topic_model(const std::string& dir) {
  std::ifstream in(dir + "/model.json");
  if (!in) throw DataError("cannot open: " + dir + "/model.json");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(dir + "/model.json: " + e.what());
  }
  TopicModel model;
  model.topic = j.at("topic").get<std::string>();
  const auto counts = j.at("train_counts").get<std::vector<long>>();
  if (counts.size() != kNumStanceClasses) {
    throw DataError("bad train_counts in " + dir + "/model.json");
  }
  std::copy(counts.begin(), counts.end(), model.train_counts.begin());
  const double dropout = j.at("config").at("dropout").get<double>();
  for (const nlohmann::json& mj : j.at("members")) {
    TopicMember m;
    const std::string ckpt = mj.at("checkpoint").get<std::string>();
    m.net = seqnet_from_tensors(load_checkpoint(dir + "/" + ckpt), dropout);
    m.best_epoch = mj.at("best_epoch").get<int>();
    m.best_val_loss = mj.at("best_val_loss").get<double>();
    m.val_losses = mj.at("val_losses").get<std::vector<double>>();
    m.val_indices = mj.at("val_indices").get<std::vector<int>>();
    m.val_predictions = mj.at("val_predictions").get<std::vector<int>>();
    model.folds.validation.push_back(m.val_indices);
    model.members.push_back(std::move(m));
  }
  if (model.members.empty()) {
    throw DataError("no members in " + dir + "/model.json");
  }
  return model;
}

}  // namespace stance
