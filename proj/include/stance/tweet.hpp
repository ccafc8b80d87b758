#pragma once

#include <string>
#include <vector>

#include "stance/tokenizer.hpp"

namespace stance {

// One raw input record. topic/stance are optional and empty when absent.
struct TweetRecord {
  std::string id;
  std::string text;
  std::string topic;
  std::string stance;
};

// A record after tokenization and phrase merging.
struct PreparedTweet {
  std::string id;
  TokenSequence tokens;
  std::string topic;
  std::string stance;
};

// Reads one JSON object per line with fields "id", "text" and optional
// "topic", "stance". Malformed lines raise DataError naming the line number.
std::vector<TweetRecord> read_tweets_jsonl(const std::string& path);

void write_tweets_jsonl(const std::string& path,
                        const std::vector<TweetRecord>& records);

std::vector<PreparedTweet> read_prepared_jsonl(const std::string& path);

void write_prepared_jsonl(const std::string& path,
                          const std::vector<PreparedTweet>& records);

// Drops retweets (text beginning "rt @", case-insensitive) and exact
// duplicate texts, keeping the first occurrence. Returns the survivors in
// input order plus the number dropped by each rule.
struct FilterStats {
  std::size_t retweets_dropped = 0;
  std::size_t duplicates_dropped = 0;
};

std::vector<TweetRecord> filter_stream(const std::vector<TweetRecord>& records,
                                       FilterStats* stats = nullptr);

}  // namespace stance
