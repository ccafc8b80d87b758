#include "stance/vocabulary.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "stance/error.hpp"

namespace stance {

Vocabulary Vocabulary::build(const std::vector<TokenSequence>& corpus,
                             std::int64_t min_count) {
  if (min_count < 1) throw std::invalid_argument("min_count must be >= 1");
  std::unordered_map<std::string, std::int64_t> counts;
  for (const auto& seq : corpus) {
    for (const auto& tok : seq) ++counts[tok];
  }
  std::vector<std::pair<std::string, std::int64_t>> kept;
  for (const auto& [tok, c] : counts) {
    if (c >= min_count) kept.emplace_back(tok, c);
  }
  if (kept.empty()) throw DataError("vocabulary empty");
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });

  Vocabulary vocab;
  vocab.min_count_ = min_count;
  vocab.tokens_.reserve(kept.size());
  vocab.counts_.reserve(kept.size());
  for (const auto& [tok, c] : kept) {
    vocab.token_to_id_.emplace(tok, static_cast<int>(vocab.tokens_.size()));
    vocab.tokens_.push_back(tok);
    vocab.counts_.push_back(c);
  }
  return vocab;
}

void Vocabulary::write(std::ostream& out) const {
  out << "#min_count=" << min_count_ << '\n';
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    out << tokens_[i] << '\t' << counts_[i] << '\n';
  }
}

void Vocabulary::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);
  write(out);
}

Vocabulary Vocabulary::read(std::istream& in, const std::string& origin) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("#min_count=", 0) != 0) {
    throw DataError(origin + ": missing vocabulary header");
  }
  Vocabulary vocab;
  vocab.min_count_ = std::stoll(line.substr(11));
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw DataError(origin + ": malformed vocabulary entry at line " +
                      std::to_string(line_no));
    }
    std::string tok = line.substr(0, tab);
    std::int64_t c = std::stoll(line.substr(tab + 1));
    if (!vocab.token_to_id_.emplace(tok, static_cast<int>(vocab.tokens_.size()))
             .second) {
      throw DataError(origin + ": duplicate token at line " +
                      std::to_string(line_no));
    }
    vocab.tokens_.push_back(std::move(tok));
    vocab.counts_.push_back(c);
  }
  if (vocab.tokens_.empty()) throw DataError("vocabulary empty");
  return vocab;
}

Vocabulary Vocabulary::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read file: " + path);
  return read(in, path);
}

std::vector<int> encode(const TokenSequence& seq, const Vocabulary& vocab,
                        int max_len) {
  if (max_len < 1) throw std::invalid_argument("max_len must be >= 1");
  const std::size_t keep = std::min<std::size_t>(seq.size(),
                                                 static_cast<std::size_t>(max_len));
  std::vector<int> ids;
  ids.reserve(keep);
  for (std::size_t i = seq.size() - keep; i < seq.size(); ++i) {
    ids.push_back(vocab.id(seq[i]));
  }
  return ids;
}

TokenSequence decode(const std::vector<int>& ids, const Vocabulary& vocab) {
  TokenSequence out;
  out.reserve(ids.size());
  for (int id : ids) {
    out.push_back(id == kOovId ? std::string(kOovToken) : vocab.token(id));
  }
  return out;
}

}  // namespace stance
