#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace stance {

struct PrepareConfig {
  std::string input;
  int min_count = 1;
  double phrase_delta = 5.0;
  std::vector<double> phrase_thresholds = {100.0, 50.0};
  std::vector<std::string> stop_tokens;
};

struct EmbedConfig {
  int dim = 256;
  int window = 10;
  int negatives = 15;
  int epochs = 5;
  double initial_lr = 0.025;
  int workers = 1;
};

struct SelectTagsConfig {
  std::string mode = "similarity";  // or "frequency"
  int k = 50;
  int n = 10000;
  std::vector<std::string> topics;
};

struct PretrainStageConfig {
  int lstm_hidden = 128;
  int max_epochs = 50;
  int patience = 3;
  int batch_size = 32;
  double split_ratio = 0.9;
};

struct FineTuneStageConfig {
  std::string train_tsv;
  double lr = 0.015;
  double momentum = 0.9;
  int epochs = 50;
  int folds = 5;
  double dropout = 0.9;
  std::string init = "pretrained";
  int batch_size = 32;
  int lstm_hidden = 128;
  int dense_hidden = 128;
  int workers = 1;
  int max_len = 30;
};

struct PredictConfig {
  std::string test_tsv;
};

struct EvaluateConfig {
  std::string gold_tsv;
  std::string pred_tsv;
};

struct PipelineConfig {
  std::string work_dir = "work";
  std::uint64_t seed = 1;
  PrepareConfig prepare;
  EmbedConfig embed;
  SelectTagsConfig select_tags;
  PretrainStageConfig pretrain;
  FineTuneStageConfig finetune;
  PredictConfig predict;
  EvaluateConfig evaluate;
};

PipelineConfig load_pipeline_config(const std::string& path);
nlohmann::json pipeline_config_json(const PipelineConfig& config);
std::string pipeline_config_hash(const PipelineConfig& config);

// Artifact paths under work_dir.
struct ArtifactPaths {
  explicit ArtifactPaths(const std::string& work_dir);
  std::string prepared, phrases, vocab;
  std::string embeddings;
  std::string candidates;
  std::string hashtag_corpus, encoder_ckpt, encoder_json;
  std::string models_dir, cv_report_json, cv_report_txt;
  std::string predictions;
  std::string report_json, report_txt, report_csv;
  std::string manifest(const std::string& stage) const;

 private:
  std::string work_dir_;
};

// Each stage validates its upstream artifacts, runs the wrapped module
// operation, writes its outputs, and finishes by atomically writing
// manifest.<stage>.json with config and content hashes.
void run_prepare(const PipelineConfig& config);
void run_embed(const PipelineConfig& config);
void run_select_tags(const PipelineConfig& config);
void run_pretrain(const PipelineConfig& config);
void run_finetune(const PipelineConfig& config);
void run_predict(const PipelineConfig& config);
void run_evaluate(const PipelineConfig& config);

}  // namespace stance
