#include "stance/phrases.hpp"

#include <fstream>
#include <sstream>
#include <unordered_map>

#include "stance/error.hpp"

namespace stance {

namespace {

void check_nonempty(const std::vector<TokenSequence>& corpus) {
  for (const auto& seq : corpus) {
    if (!seq.empty()) return;
  }
  throw DataError("empty corpus");
}

std::unordered_map<std::string, long long> unigram_counts(
    const std::vector<TokenSequence>& corpus) {
  std::unordered_map<std::string, long long> counts;
  for (const auto& seq : corpus) {
    for (const auto& tok : seq) ++counts[tok];
  }
  return counts;
}

}  // namespace

std::map<TokenPair, double> bigram_scores(
    const std::vector<TokenSequence>& corpus, double delta) {
  check_nonempty(corpus);
  const auto unigrams = unigram_counts(corpus);
  std::map<TokenPair, long long> pair_counts;
  for (const auto& seq : corpus) {
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
      ++pair_counts[{seq[i], seq[i + 1]}];
    }
  }
  const double scale = static_cast<double>(unigrams.size());
  std::map<TokenPair, double> scores;
  for (const auto& [pair, c_ab] : pair_counts) {
    const double c_a = static_cast<double>(unigrams.at(pair.first));
    const double c_b = static_cast<double>(unigrams.at(pair.second));
    scores[pair] = (static_cast<double>(c_ab) - delta) / (c_a * c_b) * scale;
  }
  return scores;
}

PhraseModel learn_phrases(const std::vector<TokenSequence>& corpus,
                          double delta, double threshold) {
  PhraseModel model;
  model.delta = delta;
  model.pass_thresholds = {threshold};
  for (const auto& [pair, score] : bigram_scores(corpus, delta)) {
    if (score < threshold) continue;
    if (is_punct_only(pair.first) || is_punct_only(pair.second)) continue;
    model.merges[pair] = pair.first + "_" + pair.second;
  }
  return model;
}

PhraseModel learn_phrases(const std::vector<TokenSequence>& corpus,
                          double delta, double threshold1, double threshold2) {
  PhraseModel first = learn_phrases(corpus, delta, threshold1);
  std::vector<TokenSequence> merged(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    merged[i] = apply_phrases(corpus[i], first);
  }
  PhraseModel second = learn_phrases(merged, delta, threshold2);
  PhraseModel combined;
  combined.delta = delta;
  combined.pass_thresholds = {threshold1, threshold2};
  combined.merges = first.merges;
  combined.merges.insert(second.merges.begin(), second.merges.end());
  return combined;
}

TokenSequence apply_phrases(const TokenSequence& seq,
                            const PhraseModel& model) {
  TokenSequence current = seq;
  for (int pass = 0; pass < model.pass_count(); ++pass) {
    TokenSequence next;
    next.reserve(current.size());
    std::size_t i = 0;
    while (i < current.size()) {
      if (i + 1 < current.size()) {
        auto it = model.merges.find({current[i], current[i + 1]});
        if (it != model.merges.end()) {
          next.push_back(it->second);
          i += 2;
          continue;
        }
      }
      next.push_back(current[i]);
      ++i;
    }
    current = std::move(next);
  }
  return current;
}

void save_phrase_model(const std::string& path, const PhraseModel& model) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);
  out << "#delta=" << model.delta;
  out << " thresholds=";
  for (std::size_t i = 0; i < model.pass_thresholds.size(); ++i) {
    if (i > 0) out << ',';
    out << model.pass_thresholds[i];
  }
  out << '\n';
  for (const auto& [pair, merged] : model.merges) {
    out << pair.first << '\t' << pair.second << '\t' << merged << '\n';
  }
}

PhraseModel load_phrase_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read file: " + path);
  PhraseModel model;
  std::string line;
  if (!std::getline(in, line) || line.rfind("#delta=", 0) != 0) {
    throw DataError(path + ": missing phrase model header");
  }
  std::istringstream header(line.substr(7));
  header >> model.delta;
  std::string rest;
  header >> rest;
  if (rest.rfind("thresholds=", 0) == 0) {
    std::istringstream ts(rest.substr(11));
    std::string item;
    while (std::getline(ts, item, ',')) {
      if (!item.empty()) model.pass_thresholds.push_back(std::stod(item));
    }
  }
  if (model.pass_thresholds.empty()) {
    throw DataError(path + ": missing thresholds in phrase model header");
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::size_t t1 = line.find('\t');
    std::size_t t2 = line.find('\t', t1 == std::string::npos ? t1 : t1 + 1);
    if (t1 == std::string::npos || t2 == std::string::npos) {
      throw DataError(path + ": malformed merge at line " +
                      std::to_string(line_no));
    }
    TokenPair pair{line.substr(0, t1), line.substr(t1 + 1, t2 - t1 - 1)};
    model.merges[pair] = line.substr(t2 + 1);
  }
  return model;
}

}  // namespace stance
