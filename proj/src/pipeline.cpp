#include "stance/pipeline.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <set>

#include "stance/embeddings.hpp"
#include "stance/error.hpp"
#include "stance/finetune.hpp"
#include "stance/hash.hpp"
#include "stance/hashtag_corpus.hpp"
#include "stance/hashtags.hpp"
#include "stance/metrics.hpp"
#include "stance/phrases.hpp"
#include "stance/pretrain.hpp"
#include "stance/sgns.hpp"
#include "stance/stance_data.hpp"
#include "stance/tweet.hpp"
#include "stance/version.hpp"
#include "stance/vocabulary.hpp"

namespace fs = std::filesystem;

namespace stance {
namespace {

using Clock = std::chrono::steady_clock;

void require_artifact(const std::string& path, const std::string& stage) {
  if (!fs::exists(path)) {
    throw DataError("missing artifact " + path + "; run '" + stage +
                    "' first");
  }
}

std::string topic_slug(const std::string& topic) {
  std::string slug;
  bool gap = false;
  for (char c : topic) {
    const char lc = (c >= 'A' && c <= 'Z') ? static_cast<char>(c + 32) : c;
    if ((lc >= 'a' && lc <= 'z') || (lc >= '0' && lc <= '9')) {
      if (gap && !slug.empty()) slug += '-';
      slug += lc;
      gap = false;
    } else {
      gap = true;
    }
  }
  return slug.empty() ? "topic" : slug;
}

class ManifestWriter {
 public:
  ManifestWriter(const PipelineConfig& config, const std::string& stage)
      : stage_(stage),
        path_(ArtifactPaths(config.work_dir).manifest(stage)),
        start_(Clock::now()) {
    manifest_["stage"] = stage;
    manifest_["version"] = kVersion;
    manifest_["config_hash"] = pipeline_config_hash(config);
    manifest_["inputs"] = nlohmann::json::object();
    manifest_["outputs"] = nlohmann::json::object();
  }

  void input(const std::string& name, const std::string& path) {
    manifest_["inputs"][name] = hex64(hash_file(path));
  }
  void output(const std::string& name, const std::string& path) {
    manifest_["outputs"][name] = hex64(hash_file(path));
  }
  void note(const std::string& key, const nlohmann::json& value) {
    manifest_["notes"][key] = value;
  }

  // Writes to a temp file then renames, so a manifest only ever appears
  // complete.
  void commit() {
    manifest_["wall_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                               Clock::now() - start_)
                               .count();
    const std::string tmp = path_ + ".tmp";
    {
      std::ofstream out(tmp, std::ios::trunc);
      if (!out) throw DataError("cannot write: " + tmp);
      out << manifest_.dump(2) << "\n";
      if (!out) throw DataError("cannot write: " + tmp);
    }
    fs::rename(tmp, path_);
  }

 private:
  std::string stage_;
  std::string path_;
  Clock::time_point start_;
  nlohmann::json manifest_;
};

std::vector<std::string> topics_for_selection(const PipelineConfig& config) {
  if (!config.select_tags.topics.empty()) return config.select_tags.topics;
  if (!config.finetune.train_tsv.empty() &&
      fs::exists(config.finetune.train_tsv)) {
    std::vector<std::string> topics;
    std::set<std::string> seen;
    for (const TweetRecord& row : read_semeval_tsv(config.finetune.train_tsv)) {
      if (seen.insert(row.topic).second) topics.push_back(row.topic);
    }
    return topics;
  }
  throw DataError(
      "no topics configured: set select_tags.topics or finetune.train_tsv");
}

std::vector<std::vector<int>> encode_corpus(
    const std::vector<PreparedTweet>& prepared, const Vocabulary& vocab) {
  std::vector<std::vector<int>> corpus;
  corpus.reserve(prepared.size());
  for (const PreparedTweet& tweet : prepared) {
    corpus.push_back(
        encode(tweet.tokens, vocab, std::numeric_limits<int>::max()));
  }
  return corpus;
}

std::map<std::string, std::vector<TweetRecord>> group_by_topic(
    const std::vector<TweetRecord>& rows, std::vector<std::string>* order) {
  std::map<std::string, std::vector<TweetRecord>> grouped;
  for (const TweetRecord& row : rows) {
    if (grouped.find(row.topic) == grouped.end() && order != nullptr) {
      order->push_back(row.topic);
    }
    grouped[row.topic].push_back(row);
  }
  return grouped;
}

}  // namespace

ArtifactPaths::ArtifactPaths(const std::string& work_dir)
    : work_dir_(work_dir) {
  prepared = work_dir + "/prepared.jsonl";
  phrases = work_dir + "/phrases.txt";
  vocab = work_dir + "/vocab.txt";
  embeddings = work_dir + "/embeddings.bin";
  candidates = work_dir + "/candidates.txt";
  hashtag_corpus = work_dir + "/hashtag_corpus.jsonl";
  encoder_ckpt = work_dir + "/encoder.ckpt";
  encoder_json = work_dir + "/encoder.json";
  models_dir = work_dir + "/models";
  cv_report_json = work_dir + "/cv_report.json";
  cv_report_txt = work_dir + "/cv_report.txt";
  predictions = work_dir + "/predictions.tsv";
  report_json = work_dir + "/report.json";
  report_txt = work_dir + "/report.txt";
  report_csv = work_dir + "/report.csv";
}

std::string ArtifactPaths::manifest(const std::string& stage) const {
  return work_dir_ + "/manifest." + stage + ".json";
}

PipelineConfig load_pipeline_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(path + ": " + e.what());
  }
  PipelineConfig c;
  try {
    if (j.contains("work_dir")) c.work_dir = j["work_dir"].get<std::string>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("prepare")) {
      const nlohmann::json& p = j["prepare"];
      if (p.contains("input")) c.prepare.input = p["input"].get<std::string>();
      if (p.contains("min_count")) c.prepare.min_count = p["min_count"].get<int>();
      if (p.contains("phrase_delta")) {
        c.prepare.phrase_delta = p["phrase_delta"].get<double>();
      }
      if (p.contains("phrase_thresholds")) {
        c.prepare.phrase_thresholds =
            p["phrase_thresholds"].get<std::vector<double>>();
      }
      if (p.contains("stop_tokens")) {
        c.prepare.stop_tokens = p["stop_tokens"].get<std::vector<std::string>>();
      }
    }
    if (j.contains("embed")) {
      const nlohmann::json& e = j["embed"];
      if (e.contains("dim")) c.embed.dim = e["dim"].get<int>();
      if (e.contains("window")) c.embed.window = e["window"].get<int>();
      if (e.contains("negatives")) c.embed.negatives = e["negatives"].get<int>();
      if (e.contains("epochs")) c.embed.epochs = e["epochs"].get<int>();
      if (e.contains("initial_lr")) c.embed.initial_lr = e["initial_lr"].get<double>();
      if (e.contains("workers")) c.embed.workers = e["workers"].get<int>();
    }
    if (j.contains("select_tags")) {
      const nlohmann::json& s = j["select_tags"];
      if (s.contains("mode")) c.select_tags.mode = s["mode"].get<std::string>();
      if (s.contains("k")) c.select_tags.k = s["k"].get<int>();
      if (s.contains("n")) c.select_tags.n = s["n"].get<int>();
      if (s.contains("topics")) {
        c.select_tags.topics = s["topics"].get<std::vector<std::string>>();
      }
    }
    if (j.contains("pretrain")) {
      const nlohmann::json& p = j["pretrain"];
      if (p.contains("lstm_hidden")) c.pretrain.lstm_hidden = p["lstm_hidden"].get<int>();
      if (p.contains("max_epochs")) c.pretrain.max_epochs = p["max_epochs"].get<int>();
      if (p.contains("patience")) c.pretrain.patience = p["patience"].get<int>();
      if (p.contains("batch_size")) c.pretrain.batch_size = p["batch_size"].get<int>();
      if (p.contains("split_ratio")) c.pretrain.split_ratio = p["split_ratio"].get<double>();
    }
    if (j.contains("finetune")) {
      const nlohmann::json& f = j["finetune"];
      if (f.contains("train_tsv")) c.finetune.train_tsv = f["train_tsv"].get<std::string>();
      if (f.contains("lr")) c.finetune.lr = f["lr"].get<double>();
      if (f.contains("momentum")) c.finetune.momentum = f["momentum"].get<double>();
      if (f.contains("epochs")) c.finetune.epochs = f["epochs"].get<int>();
      if (f.contains("folds")) c.finetune.folds = f["folds"].get<int>();
      if (f.contains("dropout")) c.finetune.dropout = f["dropout"].get<double>();
      if (f.contains("init")) c.finetune.init = f["init"].get<std::string>();
      if (f.contains("batch_size")) c.finetune.batch_size = f["batch_size"].get<int>();
      if (f.contains("lstm_hidden")) c.finetune.lstm_hidden = f["lstm_hidden"].get<int>();
      if (f.contains("dense_hidden")) c.finetune.dense_hidden = f["dense_hidden"].get<int>();
      if (f.contains("workers")) c.finetune.workers = f["workers"].get<int>();
      if (f.contains("max_len")) c.finetune.max_len = f["max_len"].get<int>();
    }
    if (j.contains("predict")) {
      const nlohmann::json& p = j["predict"];
      if (p.contains("test_tsv")) c.predict.test_tsv = p["test_tsv"].get<std::string>();
    }
    if (j.contains("evaluate")) {
      const nlohmann::json& e = j["evaluate"];
      if (e.contains("gold_tsv")) c.evaluate.gold_tsv = e["gold_tsv"].get<std::string>();
      if (e.contains("pred_tsv")) c.evaluate.pred_tsv = e["pred_tsv"].get<std::string>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path + ": " + e.what());
  }
  return c;
}

nlohmann::json pipeline_config_json(const PipelineConfig& c) {
  nlohmann::json j;
  j["work_dir"] = c.work_dir;
  j["seed"] = c.seed;
  j["prepare"] = {{"input", c.prepare.input},
                  {"min_count", c.prepare.min_count},
                  {"phrase_delta", c.prepare.phrase_delta},
                  {"phrase_thresholds", c.prepare.phrase_thresholds},
                  {"stop_tokens", c.prepare.stop_tokens}};
  j["embed"] = {{"dim", c.embed.dim},
                {"window", c.embed.window},
                {"negatives", c.embed.negatives},
                {"epochs", c.embed.epochs},
                {"initial_lr", c.embed.initial_lr},
                {"workers", c.embed.workers}};
  j["select_tags"] = {{"mode", c.select_tags.mode},
                      {"k", c.select_tags.k},
                      {"n", c.select_tags.n},
                      {"topics", c.select_tags.topics}};
  j["pretrain"] = {{"lstm_hidden", c.pretrain.lstm_hidden},
                   {"max_epochs", c.pretrain.max_epochs},
                   {"patience", c.pretrain.patience},
                   {"batch_size", c.pretrain.batch_size},
                   {"split_ratio", c.pretrain.split_ratio}};
  j["finetune"] = {{"train_tsv", c.finetune.train_tsv},
                   {"lr", c.finetune.lr},
                   {"momentum", c.finetune.momentum},
                   {"epochs", c.finetune.epochs},
                   {"folds", c.finetune.folds},
                   {"dropout", c.finetune.dropout},
                   {"init", c.finetune.init},
                   {"batch_size", c.finetune.batch_size},
                   {"lstm_hidden", c.finetune.lstm_hidden},
                   {"dense_hidden", c.finetune.dense_hidden},
                   {"workers", c.finetune.workers},
                   {"max_len", c.finetune.max_len}};
  j["predict"] = {{"test_tsv", c.predict.test_tsv}};
  j["evaluate"] = {{"gold_tsv", c.evaluate.gold_tsv},
                   {"pred_tsv", c.evaluate.pred_tsv}};
  return j;
}

std::string pipeline_config_hash(const PipelineConfig& config) {
  return hex64(fnv1a(pipeline_config_json(config).dump()));
}

void run_prepare(const PipelineConfig& config) {
  const ArtifactPaths paths(config.work_dir);
  fs::create_directories(config.work_dir);
  if (config.prepare.input.empty()) {
    throw DataError("prepare.input is not configured");
  }
  require_artifact(config.prepare.input, "prepare (input missing)");
  ManifestWriter manifest(config, "prepare");
  manifest.input("raw", config.prepare.input);

  const std::vector<TweetRecord> raw = read_tweets_jsonl(config.prepare.input);
  FilterStats stats;
  const std::vector<TweetRecord> kept = filter_stream(raw, &stats);
  if (kept.empty()) throw DataError("no records left after filtering");

  std::vector<TokenSequence> tokenized;
  tokenized.reserve(kept.size());
  for (const TweetRecord& record : kept) {
    tokenized.push_back(tokenize(record.text));
  }

  PhraseModel phrases;
  const std::vector<double>& th = config.prepare.phrase_thresholds;
  if (th.size() == 1) {
    phrases = learn_phrases(tokenized, config.prepare.phrase_delta, th[0]);
  } else if (th.size() == 2) {
    phrases =
        learn_phrases(tokenized, config.prepare.phrase_delta, th[0], th[1]);
  } else {
    throw DataError("prepare.phrase_thresholds must have 1 or 2 entries");
  }

  std::vector<PreparedTweet> prepared;
  std::vector<TokenSequence> merged;
  prepared.reserve(kept.size());
  merged.reserve(kept.size());
  for (std::size_t i = 0; i < kept.size(); ++i) {
    PreparedTweet out;
    out.id = kept[i].id;
    out.tokens = apply_phrases(tokenized[i], phrases);
    out.topic = kept[i].topic;
    out.stance = kept[i].stance;
    merged.push_back(out.tokens);
    prepared.push_back(std::move(out));
  }
  const Vocabulary vocab = Vocabulary::build(merged, config.prepare.min_count);

  write_prepared_jsonl(paths.prepared, prepared);
  save_phrase_model(paths.phrases, phrases);
  vocab.save(paths.vocab);

  manifest.output("prepared", paths.prepared);
  manifest.output("phrases", paths.phrases);
  manifest.output("vocab", paths.vocab);
  manifest.note("records", prepared.size());
  manifest.note("retweets_dropped", stats.retweets_dropped);
  manifest.note("duplicates_dropped", stats.duplicates_dropped);
  manifest.note("vocabulary_size", vocab.size());
  manifest.note("phrase_merges", phrases.merges.size());
  manifest.commit();
}

void run_embed(const PipelineConfig& config) {
  const ArtifactPaths paths(config.work_dir);
  require_artifact(paths.prepared, "prepare");
  require_artifact(paths.vocab, "prepare");
  ManifestWriter manifest(config, "embed");
  manifest.input("prepared", paths.prepared);
  manifest.input("vocab", paths.vocab);
  if (fs::exists(paths.manifest("prepare"))) {
    manifest.input("manifest.prepare", paths.manifest("prepare"));
  }

  const std::vector<PreparedTweet> prepared =
      read_prepared_jsonl(paths.prepared);
  const Vocabulary vocab = Vocabulary::load(paths.vocab);

  SgnsConfig sgns;
  sgns.dim = config.embed.dim;
  sgns.window = config.embed.window;
  sgns.negatives = config.embed.negatives;
  sgns.epochs = config.embed.epochs;
  sgns.initial_lr = static_cast<float>(config.embed.initial_lr);
  sgns.seed = config.seed;
  sgns.workers = config.embed.workers;

  const EmbeddingMatrix emb =
      train_skipgram(encode_corpus(prepared, vocab), vocab, sgns);
  save_embeddings(paths.embeddings, emb, vocab);

  manifest.output("embeddings", paths.embeddings);
  manifest.note("dim", config.embed.dim);
  manifest.commit();
}

void run_select_tags(const PipelineConfig& config) {
  const ArtifactPaths paths(config.work_dir);
  require_artifact(paths.embeddings, "embed");
  require_artifact(paths.phrases, "prepare");
  ManifestWriter manifest(config, "select-tags");
  manifest.input("embeddings", paths.embeddings);
  manifest.input("phrases", paths.phrases);
  if (fs::exists(paths.manifest("embed"))) {
    manifest.input("manifest.embed", paths.manifest("embed"));
  }

  const EmbeddingFile emb = load_embeddings(paths.embeddings);
  HashtagCandidateSet set;
  if (config.select_tags.mode == "similarity") {
    const PhraseModel phrases = load_phrase_model(paths.phrases);
    set = select_hashtags_by_similarity(topics_for_selection(config),
                                        emb.embeddings, emb.vocab, phrases,
                                        config.select_tags.k);
  } else if (config.select_tags.mode == "frequency") {
    set = select_hashtags_by_frequency(emb.vocab, config.select_tags.n);
  } else {
    throw DataError("unknown select_tags.mode: " + config.select_tags.mode);
  }
  if (set.tags.empty()) throw DataError("no candidate hashtags selected");
  save_candidates(paths.candidates, set);

  manifest.output("candidates", paths.candidates);
  manifest.note("candidate_count", set.tags.size());
  manifest.note("mode", set.mode);
  manifest.commit();
}

void run_pretrain(const PipelineConfig& config) {
  const ArtifactPaths paths(config.work_dir);
  require_artifact(paths.prepared, "prepare");
  require_artifact(paths.embeddings, "embed");
  require_artifact(paths.candidates, "select-tags");
  ManifestWriter manifest(config, "pretrain");
  manifest.input("prepared", paths.prepared);
  manifest.input("embeddings", paths.embeddings);
  manifest.input("candidates", paths.candidates);
  if (fs::exists(paths.manifest("select-tags"))) {
    manifest.input("manifest.select-tags", paths.manifest("select-tags"));
  }

  const std::vector<PreparedTweet> prepared =
      read_prepared_jsonl(paths.prepared);
  const EmbeddingFile emb = load_embeddings(paths.embeddings);
  const HashtagCandidateSet candidates = load_candidates(paths.candidates);

  const HashtagCorpus corpus = extract_hashtag_corpus(
      prepared, candidates, emb.vocab, config.pretrain.split_ratio,
      config.seed);
  save_hashtag_corpus(paths.hashtag_corpus, corpus, emb.vocab, candidates);

  PretrainConfig pc;
  pc.lstm_hidden = config.pretrain.lstm_hidden;
  pc.max_epochs = config.pretrain.max_epochs;
  pc.patience = config.pretrain.patience;
  pc.batch_size = config.pretrain.batch_size;
  pc.seed = config.seed;
  const PretrainedEncoder encoder =
      pretrain_encoder(corpus, emb.embeddings, candidates, pc);
  save_encoder(paths.encoder_ckpt, paths.encoder_json, encoder);

  manifest.output("hashtag_corpus", paths.hashtag_corpus);
  manifest.output("encoder", paths.encoder_ckpt);
  manifest.output("encoder_meta", paths.encoder_json);
  manifest.note("train_examples", corpus.train.size());
  manifest.note("dev_examples", corpus.dev.size());
  manifest.note("dev_accuracy", encoder.dev_accuracy);
  manifest.note("best_epoch", encoder.best_epoch);
  manifest.commit();
}

void run_finetune(const PipelineConfig& config) {
  const ArtifactPaths paths(config.work_dir);
  require_artifact(paths.vocab, "prepare");
  require_artifact(paths.phrases, "prepare");
  if (config.finetune.train_tsv.empty()) {
    throw DataError("finetune.train_tsv is not configured");
  }
  require_artifact(config.finetune.train_tsv, "finetune (training data)");

  FineTuneConfig ft;
  ft.lr = config.finetune.lr;
  ft.momentum = config.finetune.momentum;
  ft.epochs = config.finetune.epochs;
  ft.folds = config.finetune.folds;
  ft.dropout = config.finetune.dropout;
  ft.init = init_source_from_name(config.finetune.init);
  ft.batch_size = config.finetune.batch_size;
  ft.lstm_hidden = config.finetune.lstm_hidden;
  ft.dense_hidden = config.finetune.dense_hidden;
  ft.workers = config.finetune.workers;

  ManifestWriter manifest(config, "finetune");
  manifest.input("train", config.finetune.train_tsv);
  manifest.input("vocab", paths.vocab);
  manifest.input("phrases", paths.phrases);

  PretrainedEncoder encoder;
  EmbeddingFile emb;
  EncoderInit init;
  std::string provenance;
  if (ft.init == InitSource::kPretrained) {
    require_artifact(paths.encoder_ckpt, "pretrain");
    require_artifact(paths.encoder_json, "pretrain");
    encoder = load_encoder(paths.encoder_ckpt, paths.encoder_json);
    init.pretrained = &encoder;
    manifest.input("encoder", paths.encoder_ckpt);
    if (fs::exists(paths.manifest("pretrain"))) {
      manifest.input("manifest.pretrain", paths.manifest("pretrain"));
    }
    provenance = "encoder:" + hex64(hash_file(paths.encoder_ckpt));
    ft.lstm_hidden = static_cast<int>(encoder.lstm.hidden());
  } else if (ft.init == InitSource::kRandomRnn) {
    require_artifact(paths.embeddings, "embed");
    emb = load_embeddings(paths.embeddings);
    init.skipgram = &emb.embeddings;
    manifest.input("embeddings", paths.embeddings);
    if (fs::exists(paths.manifest("embed"))) {
      manifest.input("manifest.embed", paths.manifest("embed"));
    }
    provenance = "embeddings:" + hex64(hash_file(paths.embeddings));
  } else {
    provenance = "random";
  }

  const Vocabulary vocab = Vocabulary::load(paths.vocab);
  const PhraseModel phrases = load_phrase_model(paths.phrases);
  init.vocab = vocab.size();
  init.dim = config.embed.dim;

  const std::vector<TweetRecord> rows =
      read_semeval_tsv(config.finetune.train_tsv);
  std::vector<std::string> topic_order;
  const std::map<std::string, std::vector<TweetRecord>> grouped =
      group_by_topic(rows, &topic_order);

  fs::create_directories(paths.models_dir);
  std::vector<int> all_golds, all_preds;
  std::vector<std::string> all_topics;
  std::map<std::string, std::array<long, kNumStanceClasses>> train_counts;
  for (const std::string& topic : topic_order) {
    const std::vector<StanceExample> examples = make_stance_examples(
        grouped.at(topic), vocab, phrases, config.prepare.stop_tokens,
        config.finetune.max_len);
    FineTuneConfig topic_config = ft;
    topic_config.seed = mix_seed(config.seed, "topic-" + topic_slug(topic));
    const TopicModel model =
        train_topic(topic, examples, init, topic_config);
    const std::string dir = paths.models_dir + "/" + topic_slug(topic);
    save_topic_model(dir, model, topic_config, provenance);
    manifest.output("model." + topic_slug(topic), dir + "/model.json");

    const std::vector<int> preds = cv_predictions(model, examples.size());
    for (std::size_t i = 0; i < examples.size(); ++i) {
      all_golds.push_back(examples[i].gold);
      all_preds.push_back(preds[i]);
      all_topics.push_back(topic);
    }
    train_counts[topic] = model.train_counts;
    std::cerr << "finetune " << topic << ": " << examples.size()
              << " examples, cv official "
              << official_score(all_golds, all_preds) << " (running)\n";
  }

  const EvalReport report =
      build_report(all_golds, all_preds, all_topics, train_counts);
  {
    std::ofstream out(paths.cv_report_json, std::ios::trunc);
    if (!out) throw DataError("cannot write: " + paths.cv_report_json);
    out << report_json(report);
  }
  {
    std::ofstream out(paths.cv_report_txt, std::ios::trunc);
    if (!out) throw DataError("cannot write: " + paths.cv_report_txt);
    out << render_report(report);
  }
  manifest.output("cv_report", paths.cv_report_json);
  manifest.note("cv_official_score", report.official);
  manifest.note("topics", topic_order);
  manifest.commit();
  std::cout << "cv official score " << report.official << "\n";
}

void run_predict(const PipelineConfig& config) {
  const ArtifactPaths paths(config.work_dir);
  require_artifact(paths.vocab, "prepare");
  require_artifact(paths.phrases, "prepare");
  require_artifact(paths.models_dir, "finetune");
  if (config.predict.test_tsv.empty()) {
    throw DataError("predict.test_tsv is not configured");
  }
  require_artifact(config.predict.test_tsv, "predict (test data)");
  ManifestWriter manifest(config, "predict");
  manifest.input("test", config.predict.test_tsv);
  manifest.input("vocab", paths.vocab);
  if (fs::exists(paths.manifest("finetune"))) {
    manifest.input("manifest.finetune", paths.manifest("finetune"));
  }

  const Vocabulary vocab = Vocabulary::load(paths.vocab);
  const PhraseModel phrases = load_phrase_model(paths.phrases);
  const std::vector<TweetRecord> rows =
      read_semeval_tsv(config.predict.test_tsv);

  std::map<std::string, TopicModel> models;
  for (const TweetRecord& row : rows) {
    if (models.find(row.topic) != models.end()) continue;
    const std::string dir = paths.models_dir + "/" + topic_slug(row.topic);
    if (!fs::exists(dir + "/model.json")) {
      throw DataError("no model for topic \"" + row.topic +
                      "\"; run 'finetune' with matching training data");
    }
    TopicModel model = load_topic_model(dir);
    if (model.topic != row.topic) {
      throw DataError("topic name mismatch: model \"" + model.topic +
                      "\" vs data \"" + row.topic + "\"");
    }
    models[row.topic] = std::move(model);
  }

  const std::vector<StanceExample> examples = make_stance_examples(
      rows, vocab, phrases, config.prepare.stop_tokens,
      config.finetune.max_len, false);
  std::vector<TweetRecord> out_rows = rows;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Prediction pred =
        predict(models.at(rows[i].topic), examples[i].ids);
    out_rows[i].stance = stance_name(pred.label);
  }
  write_semeval_tsv(paths.predictions, out_rows);

  manifest.output("predictions", paths.predictions);
  manifest.note("rows", out_rows.size());
  manifest.commit();
}

void run_evaluate(const PipelineConfig& config) {
  const ArtifactPaths paths(config.work_dir);
  const std::string gold_path = config.evaluate.gold_tsv;
  std::string pred_path = config.evaluate.pred_tsv;
  if (pred_path.empty()) pred_path = paths.predictions;
  if (gold_path.empty()) {
    throw DataError("evaluate.gold_tsv is not configured");
  }
  require_artifact(gold_path, "evaluate (gold data)");
  require_artifact(pred_path, "predict");
  fs::create_directories(config.work_dir);
  ManifestWriter manifest(config, "evaluate");
  manifest.input("gold", gold_path);
  manifest.input("predictions", pred_path);
  if (fs::exists(paths.manifest("predict"))) {
    manifest.input("manifest.predict", paths.manifest("predict"));
  }

  const std::vector<TweetRecord> gold_rows = read_semeval_tsv(gold_path);
  const std::vector<TweetRecord> pred_rows = read_semeval_tsv(pred_path);
  if (gold_rows.empty()) throw DataError("empty gold file: " + gold_path);
  std::map<std::string, const TweetRecord*> by_id;
  for (const TweetRecord& row : pred_rows) {
    const std::string key = row.id + "\t" + row.topic;
    if (!by_id.emplace(key, &row).second) {
      throw DataError("duplicate prediction for " + row.id);
    }
  }
  std::vector<int> golds, preds;
  std::vector<std::string> topics;
  for (const TweetRecord& row : gold_rows) {
    const auto it = by_id.find(row.id + "\t" + row.topic);
    if (it == by_id.end()) {
      throw DataError("no prediction for id " + row.id + " topic \"" +
                      row.topic + "\"");
    }
    golds.push_back(stance_from_name(row.stance, "gold row " + row.id));
    preds.push_back(
        stance_from_name(it->second->stance, "prediction row " + row.id));
    topics.push_back(row.topic);
  }

  std::map<std::string, std::array<long, kNumStanceClasses>> train_counts;
  if (fs::exists(paths.models_dir)) {
    for (const std::string& topic : topics) {
      if (train_counts.find(topic) != train_counts.end()) continue;
      const std::string model_json =
          paths.models_dir + "/" + topic_slug(topic) + "/model.json";
      if (!fs::exists(model_json)) continue;
      std::ifstream in(model_json);
      nlohmann::json j;
      in >> j;
      const auto counts = j.at("train_counts").get<std::vector<long>>();
      std::array<long, kNumStanceClasses> arr{};
      std::copy(counts.begin(), counts.end(), arr.begin());
      train_counts[topic] = arr;
    }
  }

  const EvalReport report = build_report(golds, preds, topics, train_counts);
  {
    std::ofstream out(paths.report_json, std::ios::trunc);
    if (!out) throw DataError("cannot write: " + paths.report_json);
    out << report_json(report);
  }
  {
    std::ofstream out(paths.report_txt, std::ios::trunc);
    if (!out) throw DataError("cannot write: " + paths.report_txt);
    out << render_report(report);
  }
  {
    std::ofstream out(paths.report_csv, std::ios::trunc);
    if (!out) throw DataError("cannot write: " + paths.report_csv);
    out << report_csv(report);
  }
  manifest.output("report", paths.report_json);
  manifest.output("report_csv", paths.report_csv);
  manifest.note("official_score", report.official);
  manifest.commit();
  std::cout << render_report(report);
}

}  // namespace stance
