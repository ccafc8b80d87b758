#pragma once

#include <map>
#include <string>
#include <vector>

#include "stance/embeddings.hpp"
#include "stance/phrases.hpp"
#include "stance/vocabulary.hpp"

namespace stance {

struct HashtagCandidateSet {
  std::vector<std::string> tags;  // unique, first-appearance order
  std::map<std::string, std::vector<std::string>> provenance;  // by topic
  std::string mode;  // "similarity" or "frequency"

  int index_of(const std::string& tag) const;  // -1 when absent
};

// Per topic: tokenize and phrase-merge the title; use the merged token's
// vector when it is in vocabulary, else the mean of in-vocabulary word
// vectors; take the top-k hashtags by cosine; union preserving first
// appearance. A title with no in-vocabulary words is an error.
HashtagCandidateSet select_hashtags_by_similarity(
    const std::vector<std::string>& topics, const EmbeddingMatrix& emb,
    const Vocabulary& vocab, const PhraseModel& phrases, int k = 50);

// The n most frequent vocabulary tokens starting with '#'.
HashtagCandidateSet select_hashtags_by_frequency(const Vocabulary& vocab,
                                                 int n = 10000);

// Text format: "# mode=<similarity|frequency>" then one hashtag per line.
void save_candidates(const std::string& path,
                     const HashtagCandidateSet& set);
HashtagCandidateSet load_candidates(const std::string& path);

}  // namespace stance
