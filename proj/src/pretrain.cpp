#include "stance/pretrain.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>
#include <set>

#include "stance/error.hpp"
#include "stance/nn/checkpoint.hpp"
#include "stance/rng.hpp"

#include <nlohmann/json.hpp>

namespace stance {
namespace {

double dev_accuracy_of(const SeqNet<float>& net,
                       const std::vector<HashtagExample>& dev) {
  long hits = 0;
  for (const HashtagExample& ex : dev) {
    const VecF probs = net.forward(ex.ids, false, nullptr);
    Eigen::Index arg = 0;
    probs.maxCoeff(&arg);
    if (static_cast<int>(arg) == ex.target) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(dev.size());
}

}  // namespace

PretrainedEncoder pretrain_encoder(const HashtagCorpus& corpus,
                                   const EmbeddingMatrix& init_emb,
                                   const HashtagCandidateSet& candidates,
                                   const PretrainConfig& config) {
  if (corpus.train.empty()) throw DataError("empty training split");
  if (corpus.dev.empty()) throw DataError("empty dev split");
  if (config.lstm_hidden < 1 || config.batch_size < 1 ||
      config.max_epochs < 0 || config.patience < 1) {
    throw DataError("invalid pretraining configuration");
  }
  std::set<int> labels;
  for (const HashtagExample& ex : corpus.train) labels.insert(ex.target);
  if (labels.size() < 2) {
    throw DataError("need at least 2 distinct target labels");
  }

  const auto classes = static_cast<Eigen::Index>(candidates.tags.size());
  Rng rng(mix_seed(config.seed, "pretrain"));
  SeqNet<float> net;
  net.emb = init_emb.input;
  net.oov = oov_vector(init_emb);
  net.lstm = LstmParams<float>::init(config.lstm_hidden, init_emb.dim(), rng);
  net.dense = DenseParams<float>::zero(0, 0);
  net.out = DenseParams<float>::init(classes, config.lstm_hidden, rng);
  net.has_dense = false;
  net.dropout = 0.0;

  PretrainedEncoder enc;
  enc.tags = candidates.tags;
  enc.mode = candidates.mode;
  enc.emb = net.emb;
  enc.oov = net.oov;
  enc.lstm = net.lstm;
  enc.best_epoch = 0;
  enc.dev_accuracy = dev_accuracy_of(net, corpus.dev);
  enc.dev_history.push_back(enc.dev_accuracy);

  SeqNetGrads<float> grads = SeqNetGrads<float>::zero_like(net);
  SeqNetGrads<float> sq_grad = SeqNetGrads<float>::zero_like(net);
  SeqNetGrads<float> sq_update = SeqNetGrads<float>::zero_like(net);
  std::vector<int> order(corpus.train.size());
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_loss = 0.0;
    std::size_t cursor = 0;
    while (cursor < order.size()) {
      const std::size_t batch_end = std::min(
          order.size(), cursor + static_cast<std::size_t>(config.batch_size));
      grads.set_zero();
      float batch_loss = 0.0f;
      for (std::size_t k = cursor; k < batch_end; ++k) {
        const HashtagExample& ex =
            corpus.train[static_cast<std::size_t>(order[k])];
        batch_loss +=
            net.example_loss(ex.ids, ex.target, 1.0f, false, nullptr, grads);
      }
      const auto batch_n = static_cast<float>(batch_end - cursor);
      grads.scale(1.0f / batch_n);
      if (!std::isfinite(batch_loss)) throw DataError("diverged");
      adadelta_step_net(net, grads, sq_grad, sq_update, config.rho,
                        config.eps);
      epoch_loss += static_cast<double>(batch_loss);
      cursor = batch_end;
    }
    const double acc = dev_accuracy_of(net, corpus.dev);
    enc.dev_history.push_back(acc);
    std::cerr << "pretrain epoch " << epoch << " loss "
              << epoch_loss / static_cast<double>(order.size()) << " dev acc "
              << acc << "\n";
    if (acc > enc.dev_accuracy) {
      enc.dev_accuracy = acc;
      enc.best_epoch = epoch;
      enc.emb = net.emb;
      enc.oov = net.oov;
      enc.lstm = net.lstm;
    } else if (epoch - enc.best_epoch >= config.patience) {
      break;
    }
  }
  return enc;
}

void save_encoder(const std::string& ckpt_path, const std::string& json_path,
                  const PretrainedEncoder& encoder) {
  std::vector<NamedTensor> ts;
  ts.push_back(tensor_from("emb", encoder.emb));
  ts.push_back(tensor_from("oov", encoder.oov));
  ts.push_back(tensor_from("lstm.w_i", encoder.lstm.w_i));
  ts.push_back(tensor_from("lstm.w_f", encoder.lstm.w_f));
  ts.push_back(tensor_from("lstm.w_g", encoder.lstm.w_g));
  ts.push_back(tensor_from("lstm.w_o", encoder.lstm.w_o));
  ts.push_back(tensor_from("lstm.u_i", encoder.lstm.u_i));
  ts.push_back(tensor_from("lstm.u_f", encoder.lstm.u_f));
  ts.push_back(tensor_from("lstm.u_g", encoder.lstm.u_g));
  ts.push_back(tensor_from("lstm.u_o", encoder.lstm.u_o));
  ts.push_back(tensor_from("lstm.b_i", encoder.lstm.b_i));
  ts.push_back(tensor_from("lstm.b_f", encoder.lstm.b_f));
  ts.push_back(tensor_from("lstm.b_g", encoder.lstm.b_g));
  ts.push_back(tensor_from("lstm.b_o", encoder.lstm.b_o));
  save_checkpoint(ckpt_path, ts);

  nlohmann::json j;
  j["dim"] = encoder.emb.cols();
  j["vocab"] = encoder.emb.rows();
  j["lstm_hidden"] = encoder.lstm.hidden();
  j["tags"] = encoder.tags;
  j["mode"] = encoder.mode;
  j["dev_accuracy"] = encoder.dev_accuracy;
  j["best_epoch"] = encoder.best_epoch;
  j["dev_history"] = encoder.dev_history;
  std::ofstream out(json_path, std::ios::trunc);
  if (!out) throw DataError("cannot write: " + json_path);
  out << j.dump(2) << "\n";
  if (!out) throw DataError("cannot write: " + json_path);
}

PretrainedEncoder load_encoder(const std::string& ckpt_path,
                               const std::string& json_path) {
  const std::vector<NamedTensor> ts = load_checkpoint(ckpt_path);
  PretrainedEncoder enc;
  enc.emb = tensor_to_table(find_tensor(ts, "emb"));
  enc.oov = tensor_to_vector(find_tensor(ts, "oov"));
  enc.lstm.w_i = tensor_to_matrix(find_tensor(ts, "lstm.w_i"));
  enc.lstm.w_f = tensor_to_matrix(find_tensor(ts, "lstm.w_f"));
  enc.lstm.w_g = tensor_to_matrix(find_tensor(ts, "lstm.w_g"));
  enc.lstm.w_o = tensor_to_matrix(find_tensor(ts, "lstm.w_o"));
  enc.lstm.u_i = tensor_to_matrix(find_tensor(ts, "lstm.u_i"));
  enc.lstm.u_f = tensor_to_matrix(find_tensor(ts, "lstm.u_f"));
  enc.lstm.u_g = tensor_to_matrix(find_tensor(ts, "lstm.u_g"));
  enc.lstm.u_o = tensor_to_matrix(find_tensor(ts, "lstm.u_o"));
  enc.lstm.b_i = tensor_to_vector(find_tensor(ts, "lstm.b_i"));
  enc.lstm.b_f = tensor_to_vector(find_tensor(ts, "lstm.b_f"));
  enc.lstm.b_g = tensor_to_vector(find_tensor(ts, "lstm.b_g"));
  enc.lstm.b_o = tensor_to_vector(find_tensor(ts, "lstm.b_o"));

  std::ifstream in(json_path);
  if (!in) throw DataError("cannot open: " + json_path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(json_path + ": " + e.what());
  }
  enc.tags = j.at("tags").get<std::vector<std::string>>();
  enc.mode = j.at("mode").get<std::string>();
  enc.dev_accuracy = j.at("dev_accuracy").get<double>();
  enc.best_epoch = j.at("best_epoch").get<int>();
  if (j.contains("dev_history")) {
    enc.dev_history = j.at("dev_history").get<std::vector<double>>();
  }
  return enc;
}

}  // namespace stance
