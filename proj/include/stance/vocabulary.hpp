#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "stance/tokenizer.hpp"

namespace stance {

// Reserved ids in encoded sequences. Neither is a vocabulary row: the OOV
// marker resolves to the mean in-vocabulary vector, the pad id to zero.
inline constexpr int kOovId = -1;
inline constexpr int kPadId = -2;

inline constexpr const char* kOovToken = "<oov>";

// Bijective token <-> dense id map with per-token counts. Ids are assigned
// by descending count, ties broken lexicographically.
class Vocabulary {
 public:
  Vocabulary() = default;

  static Vocabulary build(const std::vector<TokenSequence>& corpus,
                          std::int64_t min_count);

  // kOovId when absent.
  int id(const std::string& token) const {
    auto it = token_to_id_.find(token);
    return it == token_to_id_.end() ? kOovId : it->second;
  }
  bool contains(const std::string& token) const {
    return token_to_id_.count(token) != 0;
  }
  const std::string& token(int id) const { return tokens_.at(static_cast<std::size_t>(id)); }
  std::int64_t count(int id) const { return counts_.at(static_cast<std::size_t>(id)); }
  int size() const { return static_cast<int>(tokens_.size()); }
  std::int64_t min_count() const { return min_count_; }

  void save(const std::string& path) const;
  static Vocabulary load(const std::string& path);

  void write(std::ostream& out) const;
  static Vocabulary read(std::istream& in, const std::string& origin);

 private:
  std::unordered_map<std::string, int> token_to_id_;
  std::vector<std::string> tokens_;
  std::vector<std::int64_t> counts_;
  std::int64_t min_count_ = 1;
};

// Maps tokens to ids (OOV -> kOovId); sequences longer than max_len keep the
// final max_len tokens. No padding is added.
std::vector<int> encode(const TokenSequence& seq, const Vocabulary& vocab,
                        int max_len);

// Inverse of encode for in-vocabulary ids; OOV markers decode to "<oov>".
TokenSequence decode(const std::vector<int>& ids, const Vocabulary& vocab);

}  // namespace stance
