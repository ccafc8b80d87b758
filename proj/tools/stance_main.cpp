#include <cstdint>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stance/error.hpp"
#include "stance/pipeline.hpp"
#include "stance/version.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::string work_dir;
  std::uint64_t seed = 0;
  CLI::Option* work_dir_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
};

stance::PipelineConfig base_config(const CommonFlags& common) {
  stance::PipelineConfig config;
  if (!common.config_path.empty()) {
    config = stance::load_pipeline_config(common.config_path);
  }
  if (common.work_dir_opt->count() > 0) config.work_dir = common.work_dir;
  if (common.seed_opt->count() > 0) config.seed = common.seed;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stance detection pipeline"};
  app.set_version_flag("--version", stance::kVersion);
  app.require_subcommand(1);

  CommonFlags common;
  app.add_option("-c,--config", common.config_path,
                 "pipeline configuration JSON")
      ->envname("STANCE_CONFIG");
  common.work_dir_opt =
      app.add_option("--work-dir", common.work_dir, "artifact directory");
  common.seed_opt = app.add_option("--seed", common.seed, "global seed");

  // prepare
  auto* prepare = app.add_subcommand(
      "prepare", "tokenize, learn phrases, build the vocabulary");
  std::string prepare_input;
  int prepare_min_count = 0;
  std::vector<std::string> prepare_stops;
  auto* prepare_input_opt =
      prepare->add_option("--input", prepare_input, "raw tweets JSONL");
  auto* prepare_min_opt = prepare->add_option(
      "--min-count", prepare_min_count, "vocabulary frequency cutoff");
  auto* prepare_stop_opt = prepare->add_option(
      "--stop-token", prepare_stops, "token removed from classifier input");

  // embed
  auto* embed =
      app.add_subcommand("embed", "train skip-gram embeddings");
  int embed_dim = 0, embed_window = 0, embed_negatives = 0, embed_epochs = 0,
      embed_workers = 0;
  double embed_lr = 0.0;
  auto* embed_dim_opt = embed->add_option("--dim", embed_dim, "vector size");
  auto* embed_window_opt =
      embed->add_option("--window", embed_window, "context window");
  auto* embed_neg_opt =
      embed->add_option("--negatives", embed_negatives, "noise samples");
  auto* embed_epochs_opt =
      embed->add_option("--epochs", embed_epochs, "training epochs");
  auto* embed_lr_opt =
      embed->add_option("--lr", embed_lr, "initial learning rate");
  auto* embed_workers_opt = embed->add_option(
      "--workers", embed_workers, "threads (more than 1 is non-deterministic)");

  // select-tags
  auto* select = app.add_subcommand(
      "select-tags", "pick candidate hashtags for distant supervision");
  std::string select_mode;
  int select_k = 0, select_n = 0;
  std::vector<std::string> select_topics;
  auto* select_mode_opt = select->add_option(
      "--mode", select_mode, "similarity or frequency");
  auto* select_k_opt =
      select->add_option("-k,--top-k", select_k, "per-topic neighbors");
  auto* select_n_opt =
      select->add_option("-n,--top-n", select_n, "frequency-mode tag count");
  auto* select_topics_opt =
      select->add_option("--topic", select_topics, "topic title (repeatable)");

  // pretrain
  auto* pretrain = app.add_subcommand(
      "pretrain", "train the hashtag-prediction encoder");
  int pre_hidden = 0, pre_epochs = 0, pre_patience = 0, pre_batch = 0;
  auto* pre_hidden_opt =
      pretrain->add_option("--hidden", pre_hidden, "LSTM size");
  auto* pre_epochs_opt =
      pretrain->add_option("--max-epochs", pre_epochs, "epoch cap");
  auto* pre_patience_opt =
      pretrain->add_option("--patience", pre_patience, "early-stop patience");
  auto* pre_batch_opt =
      pretrain->add_option("--batch-size", pre_batch, "batch size");

  // finetune
  auto* finetune = app.add_subcommand(
      "finetune", "train per-topic stance ensembles");
  std::string ft_train, ft_init;
  int ft_epochs = 0, ft_folds = 0, ft_workers = 0, ft_batch = 0;
  double ft_lr = 0.0, ft_momentum = 0.0, ft_dropout = 0.0;
  auto* ft_train_opt =
      finetune->add_option("--train", ft_train, "labeled stance TSV");
  auto* ft_init_opt = finetune->add_option(
      "--init", ft_init, "pretrained, random-rnn, or random-all");
  auto* ft_epochs_opt =
      finetune->add_option("--epochs", ft_epochs, "epochs per fold");
  auto* ft_folds_opt =
      finetune->add_option("--folds", ft_folds, "cross-validation folds");
  auto* ft_lr_opt = finetune->add_option("--lr", ft_lr, "learning rate");
  auto* ft_momentum_opt =
      finetune->add_option("--momentum", ft_momentum, "momentum");
  auto* ft_dropout_opt =
      finetune->add_option("--dropout", ft_dropout, "dropout probability");
  auto* ft_workers_opt =
      finetune->add_option("--workers", ft_workers, "fold training threads");
  auto* ft_batch_opt =
      finetune->add_option("--batch-size", ft_batch, "batch size");

  // predict
  auto* predict = app.add_subcommand("predict", "label a test TSV");
  std::string predict_test;
  auto* predict_test_opt =
      predict->add_option("--test", predict_test, "test TSV to label");

  // evaluate
  auto* evaluate =
      app.add_subcommand("evaluate", "score predictions against gold labels");
  std::string eval_gold, eval_pred;
  auto* eval_gold_opt =
      evaluate->add_option("--gold", eval_gold, "gold TSV");
  auto* eval_pred_opt =
      evaluate->add_option("--pred", eval_pred, "predictions TSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    stance::PipelineConfig config = base_config(common);
    if (prepare->parsed()) {
      if (prepare_input_opt->count() > 0) config.prepare.input = prepare_input;
      if (prepare_min_opt->count() > 0) {
        config.prepare.min_count = prepare_min_count;
      }
      if (prepare_stop_opt->count() > 0) {
        config.prepare.stop_tokens = prepare_stops;
      }
      stance::run_prepare(config);
    } else if (embed->parsed()) {
      if (embed_dim_opt->count() > 0) config.embed.dim = embed_dim;
      if (embed_window_opt->count() > 0) config.embed.window = embed_window;
      if (embed_neg_opt->count() > 0) config.embed.negatives = embed_negatives;
      if (embed_epochs_opt->count() > 0) config.embed.epochs = embed_epochs;
      if (embed_lr_opt->count() > 0) config.embed.initial_lr = embed_lr;
      if (embed_workers_opt->count() > 0) config.embed.workers = embed_workers;
      stance::run_embed(config);
    } else if (select->parsed()) {
      if (select_mode_opt->count() > 0) config.select_tags.mode = select_mode;
      if (select_k_opt->count() > 0) config.select_tags.k = select_k;
      if (select_n_opt->count() > 0) config.select_tags.n = select_n;
      if (select_topics_opt->count() > 0) {
        config.select_tags.topics = select_topics;
      }
      stance::run_select_tags(config);
    } else if (pretrain->parsed()) {
      if (pre_hidden_opt->count() > 0) {
        config.pretrain.lstm_hidden = pre_hidden;
      }
      if (pre_epochs_opt->count() > 0) config.pretrain.max_epochs = pre_epochs;
      if (pre_patience_opt->count() > 0) {
        config.pretrain.patience = pre_patience;
      }
      if (pre_batch_opt->count() > 0) config.pretrain.batch_size = pre_batch;
      stance::run_pretrain(config);
    } else if (finetune->parsed()) {
      if (ft_train_opt->count() > 0) config.finetune.train_tsv = ft_train;
      if (ft_init_opt->count() > 0) config.finetune.init = ft_init;
      if (ft_epochs_opt->count() > 0) config.finetune.epochs = ft_epochs;
      if (ft_folds_opt->count() > 0) config.finetune.folds = ft_folds;
      if (ft_lr_opt->count() > 0) config.finetune.lr = ft_lr;
      if (ft_momentum_opt->count() > 0) config.finetune.momentum = ft_momentum;
      if (ft_dropout_opt->count() > 0) config.finetune.dropout = ft_dropout;
      if (ft_workers_opt->count() > 0) config.finetune.workers = ft_workers;
      if (ft_batch_opt->count() > 0) config.finetune.batch_size = ft_batch;
      stance::run_finetune(config);
    } else if (predict->parsed()) {
      if (predict_test_opt->count() > 0) config.predict.test_tsv = predict_test;
      stance::run_predict(config);
    } else if (evaluate->parsed()) {
      if (eval_gold_opt->count() > 0) config.evaluate.gold_tsv = eval_gold;
      if (eval_pred_opt->count() > 0) config.evaluate.pred_tsv = eval_pred;
      stance::run_evaluate(config);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
