#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stance/hashtags.hpp"
#include "stance/tweet.hpp"
#include "stance/vocabulary.hpp"

namespace stance {

struct HashtagExample {
  std::string id;
  std::vector<int> ids;  // encoded tokens, hashtags removed, never empty
  int target = 0;        // index into the candidate set
};

struct HashtagCorpus {
  std::vector<HashtagExample> train;
  std::vector<HashtagExample> dev;
  int num_labels = 0;
};

// Keeps tweets containing at least one candidate tag, labels each with its
// most corpus-frequent contained candidate (ties to the higher-ranked
// vocabulary entry), strips every '#'-initial token, drops emptied tweets,
// then shuffles by seed and splits 90/10 stratified by label for labels with
// at least min_stratum examples.
HashtagCorpus extract_hashtag_corpus(const std::vector<PreparedTweet>& tweets,
                                     const HashtagCandidateSet& candidates,
                                     const Vocabulary& vocab,
                                     double split_ratio = 0.9,
                                     std::uint64_t seed = 1, int max_len = 30,
                                     int min_stratum = 10);

// JSON lines: {"id", "tokens", "target", "split"}; tokens are decoded
// strings (OOV ids round-trip through the OOV token).
void save_hashtag_corpus(const std::string& path, const HashtagCorpus& corpus,
                         const Vocabulary& vocab,
                         const HashtagCandidateSet& candidates);
HashtagCorpus load_hashtag_corpus(const std::string& path,
                                  const Vocabulary& vocab,
                                  const HashtagCandidateSet& candidates,
                                  int max_len = 30);

}  // namespace stance
