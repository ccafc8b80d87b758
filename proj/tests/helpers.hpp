#pragma once

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "stance/rng.hpp"
#include "stance/tokenizer.hpp"
#include "stance/tweet.hpp"

namespace testutil {

// Self-cleaning unique directory under the system temp path.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    const auto base = std::filesystem::temp_directory_path();
    for (int i = 0;; ++i) {
      auto candidate = base / (tag + "-" + std::to_string(::getpid()) + "-" +
                               std::to_string(i));
      std::error_code ec;
      if (std::filesystem::create_directory(candidate, ec)) {
        path_ = candidate.string();
        return;
      }
    }
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::string& path() const { return path_; }
  std::string file(const std::string& name) const { return path_ + "/" + name; }

 private:
  std::string path_;
};

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::trunc | std::ios::binary);
  out << content;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline std::vector<stance::TokenSequence> split_corpus(
    const std::vector<std::string>& lines) {
  std::vector<stance::TokenSequence> corpus;
  for (const std::string& line : lines) {
    stance::TokenSequence seq;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) seq.push_back(tok);
    corpus.push_back(seq);
  }
  return corpus;
}

// Two disjoint 20-token clusters; every sentence stays inside one cluster.
inline std::vector<stance::TokenSequence> two_cluster_corpus(
    int sentences, int sentence_len, std::uint64_t seed) {
  std::vector<std::string> a, b;
  for (int i = 0; i < 20; ++i) {
    a.push_back("a" + std::to_string(i));
    b.push_back("b" + std::to_string(i));
  }
  stance::Rng rng(seed);
  std::vector<stance::TokenSequence> corpus;
  for (int s = 0; s < sentences; ++s) {
    const std::vector<std::string>& pool = (s % 2 == 0) ? a : b;
    stance::TokenSequence seq;
    for (int t = 0; t < sentence_len; ++t) {
      seq.push_back(pool[rng.below(pool.size())]);
    }
    corpus.push_back(seq);
  }
  return corpus;
}

// Tweets where one signature token perfectly predicts the tweet's hashtag.
inline std::vector<stance::TweetRecord> tagged_tweets(int count, int tags,
                                                      std::uint64_t seed) {
  stance::Rng rng(seed);
  std::vector<std::string> filler = {"the",  "and", "with", "from",
                                     "about", "very", "today"};
  std::vector<stance::TweetRecord> tweets;
  for (int i = 0; i < count; ++i) {
    const int tag = static_cast<int>(rng.below(static_cast<std::uint64_t>(tags)));
    std::string text;
    const int words = 3 + static_cast<int>(rng.below(4));
    for (int w = 0; w < words; ++w) {
      text += filler[rng.below(filler.size())] + " ";
    }
    text += "signal" + std::to_string(tag) + " #tag" + std::to_string(tag);
    stance::TweetRecord tweet;
    tweet.id = "t" + std::to_string(i);
    tweet.text = text;
    tweets.push_back(std::move(tweet));
  }
  return tweets;
}

}  // namespace testutil
