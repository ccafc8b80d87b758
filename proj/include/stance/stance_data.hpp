#pragma once

#include <string>
#include <vector>

#include "stance/labels.hpp"
#include "stance/phrases.hpp"
#include "stance/tweet.hpp"
#include "stance/vocabulary.hpp"

namespace stance {

struct StanceExample {
  std::string id;
  std::vector<int> ids;  // token ids, length <= max_len, never empty
  int gold = kNone;
  std::string topic;
};

// Tab-separated SemEval stance format: header "ID\tTarget\tTweet\tStance".
// The stance column is kept verbatim (test inputs may carry UNKNOWN);
// label validation happens when converting to examples.
std::vector<TweetRecord> read_semeval_tsv(const std::string& path);
void write_semeval_tsv(const std::string& path,
                       const std::vector<TweetRecord>& rows);

// Tokenize, phrase-merge, drop stop tokens, encode. Sequences that end up
// empty encode as a single OOV id so every row yields an example.
// require_label: reject stance values outside FAVOR/AGAINST/NONE.
std::vector<StanceExample> make_stance_examples(
    const std::vector<TweetRecord>& rows, const Vocabulary& vocab,
    const PhraseModel& phrases, const std::vector<std::string>& stop_tokens,
    int max_len = 30, bool require_label = true);

}  // namespace stance
