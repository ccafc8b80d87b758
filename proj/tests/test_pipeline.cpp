#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "helpers.hpp"
#include "stance/error.hpp"
#include "stance/hash.hpp"
#include "stance/labels.hpp"
#include "stance/pipeline.hpp"
#include "stance/stance_data.hpp"
#include "stance/tokenizer.hpp"
#include "stance/tweet.hpp"
#include "stance/vocabulary.hpp"

using namespace stance;
using testutil::TempDir;
using testutil::read_file;
using testutil::write_file;

namespace fs = std::filesystem;

namespace {

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(bool(in));
  nlohmann::json j;
  in >> j;
  return j;
}

std::vector<TweetRecord> semeval_rows(const std::string& topic, int count,
                                      bool labeled) {
  static const char* filler[] = {"the", "and", "with", "from", "about"};
  std::vector<TweetRecord> rows;
  for (int i = 0; i < count; ++i) {
    const int cls = i % 3;
    TweetRecord row;
    row.id = (labeled ? "s" : "x") + std::to_string(i);
    row.topic = topic;
    std::string text = filler[i % 5];
    text += ' ';
    text += filler[(i / 5) % 5];
    if (cls == kFavor) {
      text += " signal0 signal0 great";
    } else if (cls == kAgainst) {
      text += " signal1 signal1 awful";
    } else {
      text += " today nothing";
    }
    row.text = text;
    row.stance = labeled ? stance_name(cls) : "UNKNOWN";
    rows.push_back(std::move(row));
  }
  return rows;
}

PipelineConfig toy_config(const TempDir& dir) {
  PipelineConfig config;
  config.work_dir = dir.file("work");
  config.seed = 11;
  config.prepare.input = dir.file("raw.jsonl");
  config.prepare.min_count = 1;
  config.embed.dim = 8;
  config.embed.window = 3;
  config.embed.negatives = 3;
  config.embed.epochs = 2;
  config.embed.initial_lr = 0.05;
  config.select_tags.mode = "frequency";
  config.select_tags.n = 2;
  config.pretrain.lstm_hidden = 8;
  config.pretrain.max_epochs = 2;
  config.pretrain.patience = 2;
  config.pretrain.batch_size = 16;
  config.finetune.train_tsv = dir.file("train.tsv");
  config.finetune.lr = 0.05;
  config.finetune.epochs = 2;
  config.finetune.folds = 5;
  config.finetune.dropout = 0.2;
  config.finetune.init = "pretrained";
  config.finetune.batch_size = 8;
  config.finetune.dense_hidden = 6;
  config.finetune.max_len = 20;
  config.predict.test_tsv = dir.file("test.tsv");
  config.evaluate.gold_tsv = dir.file("gold.tsv");
  return config;
}

void write_toy_inputs(const TempDir& dir) {
  write_tweets_jsonl(dir.file("raw.jsonl"), testutil::tagged_tweets(120, 2, 5));
  write_semeval_tsv(dir.file("train.tsv"), semeval_rows("Toy Topic", 30, true));
  write_semeval_tsv(dir.file("test.tsv"), semeval_rows("Toy Topic", 6, false));
  std::vector<TweetRecord> gold = semeval_rows("Toy Topic", 6, true);
  for (TweetRecord& row : gold) row.id = "x" + row.id.substr(1);
  write_semeval_tsv(dir.file("gold.tsv"), gold);
}

}  // namespace

TEST_CASE("semeval tsv reader and writer round-trip byte-exactly") {
  TempDir dir("tsv");
  std::vector<TweetRecord> rows(3);
  rows[0] = {"10", "We need action now! #go", "Climate Change", "FAVOR"};
  rows[1] = {"11", "not convinced, sorry", "Climate Change", "AGAINST"};
  rows[2] = {"12", "what's for lunch", "Climate Change", "NONE"};

  const std::string first = dir.file("a.tsv");
  write_semeval_tsv(first, rows);
  const std::vector<TweetRecord> back = read_semeval_tsv(first);
  REQUIRE(back.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(back[i].id == rows[i].id);
    CHECK(back[i].topic == rows[i].topic);
    CHECK(back[i].text == rows[i].text);
    CHECK(back[i].stance == rows[i].stance);
  }

  const std::string second = dir.file("b.tsv");
  write_semeval_tsv(second, back);
  CHECK(read_file(first) == read_file(second));
}

TEST_CASE("semeval tsv reader rejects malformed files") {
  TempDir dir("tsv-bad");

  const std::string header = "ID\tTarget\tTweet\tStance\n";
  write_file(dir.file("head.tsv"), "id\ttopic\ttext\tstance\n");
  CHECK_THROWS_AS(read_semeval_tsv(dir.file("head.tsv")), DataError);

  write_file(dir.file("fields.tsv"),
             header + "1\tt\thello\tNONE\n2\tt\tmissing stance\n");
  try {
    read_semeval_tsv(dir.file("fields.tsv"));
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }

  write_file(dir.file("noid.tsv"), header + "\tt\thello\tNONE\n");
  CHECK_THROWS_AS(read_semeval_tsv(dir.file("noid.tsv")), DataError);

  write_file(dir.file("empty.tsv"), "");
  CHECK_THROWS_AS(read_semeval_tsv(dir.file("empty.tsv")), DataError);
  CHECK_THROWS_AS(read_semeval_tsv(dir.file("nope.tsv")), DataError);
}

TEST_CASE("config file overrides only the listed fields") {
  TempDir dir("config");
  nlohmann::json j;
  j["work_dir"] = "elsewhere";
  j["seed"] = 7;
  j["prepare"] = {{"input", "raw.jsonl"}, {"min_count", 2}};
  j["embed"] = {{"dim", 12}, {"epochs", 3}};
  j["select_tags"] = {{"mode", "frequency"}, {"n", 4}};
  j["pretrain"] = {{"lstm_hidden", 8}, {"max_epochs", 2}};
  j["finetune"] = {{"train_tsv", "train.tsv"}, {"folds", 3},
                   {"init", "random-all"}};
  j["predict"] = {{"test_tsv", "test.tsv"}};
  j["evaluate"] = {{"gold_tsv", "gold.tsv"}};
  write_file(dir.file("config.json"), j.dump());

  const PipelineConfig c = load_pipeline_config(dir.file("config.json"));
  CHECK(c.work_dir == "elsewhere");
  CHECK(c.seed == 7);
  CHECK(c.prepare.input == "raw.jsonl");
  CHECK(c.prepare.min_count == 2);
  CHECK(c.embed.dim == 12);
  CHECK(c.embed.epochs == 3);
  CHECK(c.select_tags.mode == "frequency");
  CHECK(c.select_tags.n == 4);
  CHECK(c.pretrain.lstm_hidden == 8);
  CHECK(c.pretrain.max_epochs == 2);
  CHECK(c.finetune.train_tsv == "train.tsv");
  CHECK(c.finetune.folds == 3);
  CHECK(c.finetune.init == "random-all");
  CHECK(c.predict.test_tsv == "test.tsv");
  CHECK(c.evaluate.gold_tsv == "gold.tsv");

  CHECK(c.prepare.phrase_delta == 5.0);
  CHECK(c.prepare.phrase_thresholds == std::vector<double>{100.0, 50.0});
  CHECK(c.embed.window == 10);
  CHECK(c.embed.negatives == 15);
  CHECK(c.embed.initial_lr == 0.025);
  CHECK(c.select_tags.k == 50);
  CHECK(c.pretrain.patience == 3);
  CHECK(c.pretrain.split_ratio == 0.9);
  CHECK(c.finetune.lr == 0.015);
  CHECK(c.finetune.momentum == 0.9);
  CHECK(c.finetune.dropout == 0.9);
  CHECK(c.finetune.max_len == 30);
}

TEST_CASE("config hash is stable and field-sensitive") {
  PipelineConfig a, b;
  CHECK(pipeline_config_hash(a) == pipeline_config_hash(b));
  CHECK(pipeline_config_hash(a).size() == 16);

  b.seed = 2;
  CHECK(pipeline_config_hash(a) != pipeline_config_hash(b));
  b = a;
  b.finetune.dropout = 0.5;
  CHECK(pipeline_config_hash(a) != pipeline_config_hash(b));
  b = a;
  b.select_tags.topics.push_back("Atheism");
  CHECK(pipeline_config_hash(a) != pipeline_config_hash(b));
}

TEST_CASE("config loader rejects unreadable files") {
  TempDir dir("config-bad");
  CHECK_THROWS_AS(load_pipeline_config(dir.file("missing.json")), DataError);

  write_file(dir.file("broken.json"), "{nope");
  CHECK_THROWS_AS(load_pipeline_config(dir.file("broken.json")), DataError);

  write_file(dir.file("typed.json"), "{\"seed\": \"eleven\"}");
  CHECK_THROWS_AS(load_pipeline_config(dir.file("typed.json")), DataError);
}

TEST_CASE("prepare emits records a phrase table a vocabulary and a manifest") {
  TempDir dir("prepare");
  std::vector<TweetRecord> raw(3);
  raw[0] = {"a", "Climate change is real", "", ""};
  raw[1] = {"b", "I watched the hearing today", "", ""};
  raw[2] = {"c", "Nothing to see here folks", "", ""};
  write_tweets_jsonl(dir.file("raw.jsonl"), raw);

  PipelineConfig config;
  config.work_dir = dir.file("work");
  config.prepare.input = dir.file("raw.jsonl");
  run_prepare(config);

  const ArtifactPaths paths(config.work_dir);
  const std::vector<PreparedTweet> prepared = read_prepared_jsonl(paths.prepared);
  REQUIRE(prepared.size() == 3);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    CHECK(prepared[i].id == raw[i].id);
    CHECK(prepared[i].tokens == tokenize(raw[i].text));
  }
  CHECK(Vocabulary::load(paths.vocab).size() > 0);
  CHECK(fs::exists(paths.phrases));

  const nlohmann::json manifest = load_json(paths.manifest("prepare"));
  CHECK(manifest.at("stage") == "prepare");
  CHECK(manifest.at("config_hash") == pipeline_config_hash(config));
  CHECK(manifest.at("notes").at("records") == 3);
  CHECK(manifest.at("inputs").contains("raw"));
  CHECK(manifest.at("outputs").contains("prepared"));
  CHECK(manifest.at("outputs").contains("phrases"));
  CHECK(manifest.at("outputs").contains("vocab"));
}

TEST_CASE("prepare drops retweets and duplicates and notes the counts") {
  TempDir dir("prepare-filter");
  std::vector<TweetRecord> raw(5);
  raw[0] = {"a", "original thought", "", ""};
  raw[1] = {"b", "RT @x: original thought", "", ""};
  raw[2] = {"c", "original thought", "", ""};
  raw[3] = {"d", "another take", "", ""};
  raw[4] = {"e", "third opinion", "", ""};
  write_tweets_jsonl(dir.file("raw.jsonl"), raw);

  PipelineConfig config;
  config.work_dir = dir.file("work");
  config.prepare.input = dir.file("raw.jsonl");
  run_prepare(config);

  const ArtifactPaths paths(config.work_dir);
  const std::vector<PreparedTweet> prepared = read_prepared_jsonl(paths.prepared);
  REQUIRE(prepared.size() == 3);
  CHECK(prepared[0].id == "a");
  CHECK(prepared[1].id == "d");
  CHECK(prepared[2].id == "e");

  const nlohmann::json manifest = load_json(paths.manifest("prepare"));
  CHECK(manifest.at("notes").at("retweets_dropped") == 1);
  CHECK(manifest.at("notes").at("duplicates_dropped") == 1);
}

TEST_CASE("prepare names the corrupted input line") {
  TempDir dir("prepare-corrupt");
  write_file(dir.file("raw.jsonl"),
             "{\"id\":\"a\",\"text\":\"fine\"}\n{broken\n");

  PipelineConfig config;
  config.work_dir = dir.file("work");
  config.prepare.input = dir.file("raw.jsonl");
  try {
    run_prepare(config);
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("prepare validates its input configuration") {
  TempDir dir("prepare-input");
  PipelineConfig config;
  config.work_dir = dir.file("work");
  try {
    run_prepare(config);
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("not configured") != std::string::npos);
  }

  config.prepare.input = dir.file("absent.jsonl");
  try {
    run_prepare(config);
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("missing artifact") != std::string::npos);
  }
}

TEST_CASE("stages name the missing prerequisite stage") {
  TempDir dir("missing");
  PipelineConfig config = toy_config(dir);
  write_toy_inputs(dir);
  const ArtifactPaths paths(config.work_dir);
  fs::create_directories(config.work_dir);

  const auto expect_stage = [](const std::function<void()>& fn,
                               const std::string& stage) {
    try {
      fn();
      FAIL("expected DataError naming " << stage);
    } catch (const DataError& e) {
      const std::string what = e.what();
      CHECK(what.find("run '" + stage + "' first") != std::string::npos);
    }
  };

  expect_stage([&] { run_embed(config); }, "prepare");
  expect_stage([&] { run_select_tags(config); }, "embed");

  run_prepare(config);
  expect_stage([&] { run_pretrain(config); }, "embed");
  expect_stage([&] { run_finetune(config); }, "pretrain");
  CHECK(!fs::exists(paths.manifest("finetune")));
  expect_stage([&] { run_predict(config); }, "finetune");

  run_embed(config);
  expect_stage([&] { run_pretrain(config); }, "select-tags");
}

TEST_CASE("evaluate scores a file against itself perfectly") {
  TempDir dir("evaluate");
  std::vector<TweetRecord> gold = semeval_rows("Climate Change", 6, true);
  const std::vector<TweetRecord> more = semeval_rows("Feminism", 6, true);
  gold.insert(gold.end(), more.begin(), more.end());
  for (std::size_t i = 0; i < gold.size(); ++i) {
    gold[i].id = "g" + std::to_string(i);
  }
  write_semeval_tsv(dir.file("gold.tsv"), gold);

  PipelineConfig config;
  config.work_dir = dir.file("work");
  config.evaluate.gold_tsv = dir.file("gold.tsv");
  config.evaluate.pred_tsv = dir.file("gold.tsv");
  run_evaluate(config);

  const ArtifactPaths paths(config.work_dir);
  const nlohmann::json report = load_json(paths.report_json);
  CHECK(report.at("official_score").get<double>() ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fs::exists(paths.report_txt));
  CHECK(fs::exists(paths.report_csv));

  const nlohmann::json manifest = load_json(paths.manifest("evaluate"));
  CHECK(manifest.at("notes").at("official_score").get<double>() ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("the toy pipeline runs end to end with a complete manifest chain") {
  TempDir dir("full");
  const PipelineConfig config = toy_config(dir);
  write_toy_inputs(dir);
  const ArtifactPaths paths(config.work_dir);

  run_prepare(config);
  run_embed(config);
  run_select_tags(config);
  run_pretrain(config);
  run_finetune(config);
  run_predict(config);
  run_evaluate(config);

  for (const char* stage : {"prepare", "embed", "select-tags", "pretrain",
                            "finetune", "predict", "evaluate"}) {
    CHECK(fs::exists(paths.manifest(stage)));
  }
  for (const std::string& artifact :
       {paths.prepared, paths.phrases, paths.vocab, paths.embeddings,
        paths.candidates, paths.hashtag_corpus, paths.encoder_ckpt,
        paths.encoder_json, paths.cv_report_json, paths.cv_report_txt,
        paths.predictions, paths.report_json, paths.report_txt,
        paths.report_csv}) {
    CHECK(fs::exists(artifact));
  }
  CHECK(fs::exists(paths.models_dir + "/toy-topic/model.json"));

  const std::vector<TweetRecord> preds = read_semeval_tsv(paths.predictions);
  const std::vector<TweetRecord> test = read_semeval_tsv(config.predict.test_tsv);
  REQUIRE(preds.size() == test.size());
  for (std::size_t i = 0; i < preds.size(); ++i) {
    CHECK(preds[i].id == test[i].id);
    CHECK(preds[i].text == test[i].text);
    const std::string& s = preds[i].stance;
    CHECK((s == "FAVOR" || s == "AGAINST" || s == "NONE"));
  }

  const std::vector<std::pair<std::string, std::string>> chain = {
      {"evaluate", "predict"},   {"predict", "finetune"},
      {"finetune", "pretrain"},  {"pretrain", "select-tags"},
      {"select-tags", "embed"},  {"embed", "prepare"}};
  for (const auto& [stage, upstream] : chain) {
    const nlohmann::json manifest = load_json(paths.manifest(stage));
    CHECK(manifest.at("stage") == stage);
    CHECK(manifest.at("config_hash") == pipeline_config_hash(config));
    CHECK(manifest.at("inputs").contains("manifest." + upstream));
  }
  const nlohmann::json prepare_manifest = load_json(paths.manifest("prepare"));
  CHECK(prepare_manifest.at("inputs").contains("raw"));
  CHECK(prepare_manifest.at("inputs").at("raw") ==
        hex64(hash_file(config.prepare.input)));
  const nlohmann::json embed_manifest = load_json(paths.manifest("embed"));
  CHECK(embed_manifest.at("inputs").at("manifest.prepare") ==
        hex64(hash_file(paths.manifest("prepare"))));

  const double cv = load_json(paths.cv_report_json)
                        .at("official_score").get<double>();
  CHECK(cv >= 0.0);
  CHECK(cv <= 1.0);
  const double official = load_json(paths.report_json)
                              .at("official_score").get<double>();
  CHECK(official >= 0.0);
  CHECK(official <= 1.0);
}

TEST_CASE("prepare and embed rerun byte-identically") {
  TempDir dir("rerun");
  write_toy_inputs(dir);
  PipelineConfig first = toy_config(dir);
  PipelineConfig second = toy_config(dir);
  first.work_dir = dir.file("work1");
  second.work_dir = dir.file("work2");

  run_prepare(first);
  run_embed(first);
  run_prepare(second);
  run_embed(second);

  const ArtifactPaths a(first.work_dir), b(second.work_dir);
  CHECK(read_file(a.prepared) == read_file(b.prepared));
  CHECK(read_file(a.phrases) == read_file(b.phrases));
  CHECK(read_file(a.vocab) == read_file(b.vocab));
  CHECK(read_file(a.embeddings) == read_file(b.embeddings));
}

#ifdef STANCE_CLI_PATH
namespace {

int cli_status(const std::string& command) {
  const int rc = std::system(command.c_str());
  REQUIRE(rc != -1);
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST_CASE("the command line tool maps failures onto exit codes") {
  const std::string cli =
      std::string("env -u STANCE_CONFIG ") + STANCE_CLI_PATH;
  CHECK(cli_status(cli + " --help >/dev/null 2>&1") == 0);
  CHECK(cli_status(cli + " --version >/dev/null 2>&1") == 0);
  CHECK(cli_status(cli + " frobnicate >/dev/null 2>&1") == 1);
  CHECK(cli_status(cli + " >/dev/null 2>&1") == 1);
  CHECK(cli_status(cli + " prepare >/dev/null 2>&1") == 2);
}

TEST_CASE("the config path environment variable is honored") {
  TempDir dir("cli-env");
  std::vector<TweetRecord> raw(3);
  raw[0] = {"a", "one small fixture", "", ""};
  raw[1] = {"b", "two small fixtures", "", ""};
  raw[2] = {"c", "three small fixtures", "", ""};
  write_tweets_jsonl(dir.file("raw.jsonl"), raw);

  nlohmann::json j;
  j["work_dir"] = dir.file("work");
  j["prepare"] = {{"input", dir.file("raw.jsonl")}};
  write_file(dir.file("config.json"), j.dump());

  const std::string command = "env STANCE_CONFIG=" + dir.file("config.json") +
                              " " + STANCE_CLI_PATH +
                              " prepare >/dev/null 2>&1";
  CHECK(cli_status(command) == 0);
  CHECK(fs::exists(ArtifactPaths(dir.file("work")).prepared));
}
#endif
