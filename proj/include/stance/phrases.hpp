#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "stance/tokenizer.hpp"

namespace stance {

using TokenPair = std::pair<std::string, std::string>;

// Bigram merge table. A merged token joins the pair with '_'. Applying the
// table pass_count times promotes collocations of up to 2^pass_count words.
struct PhraseModel {
  std::map<TokenPair, std::string> merges;
  double delta = 5.0;
  std::vector<double> pass_thresholds;  // one per pass

  int pass_count() const { return static_cast<int>(pass_thresholds.size()); }
};

// score(a,b) = (count(ab) - delta) / (count(a) * count(b)) * |distinct tokens|
// for every adjacent pair in the corpus.
std::map<TokenPair, double> bigram_scores(
    const std::vector<TokenSequence>& corpus, double delta);

// Single learning pass: pairs scoring >= threshold enter the table; pairs
// with a punctuation-only member never do.
PhraseModel learn_phrases(const std::vector<TokenSequence>& corpus,
                          double delta, double threshold);

// Two consecutive passes: the second pass is learned on the corpus with the
// first pass applied, and both tables are combined into one model with
// pass_count 2.
PhraseModel learn_phrases(const std::vector<TokenSequence>& corpus,
                          double delta, double threshold1, double threshold2);

// Greedy left-to-right scan, repeated pass_count times.
TokenSequence apply_phrases(const TokenSequence& seq, const PhraseModel& model);

void save_phrase_model(const std::string& path, const PhraseModel& model);
PhraseModel load_phrase_model(const std::string& path);

}  // namespace stance
