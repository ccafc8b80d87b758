#include "stance/hashtags.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "stance/error.hpp"
#include "stance/tokenizer.hpp"

namespace stance {

int HashtagCandidateSet::index_of(const std::string& tag) const {
  const auto it = std::find(tags.begin(), tags.end(), tag);
  return it == tags.end() ? -1 : static_cast<int>(it - tags.begin());
}

HashtagCandidateSet select_hashtags_by_similarity(
    const std::vector<std::string>& topics, const EmbeddingMatrix& emb,
    const Vocabulary& vocab, const PhraseModel& phrases, int k) {
  if (topics.empty()) throw DataError("no topics given");
  HashtagCandidateSet set;
  set.mode = "similarity";
  std::set<std::string> seen;
  const auto starts_with_hash = [](const std::string& t) {
    return !t.empty() && t[0] == '#';
  };
  for (const std::string& topic : topics) {
    const TokenSequence merged = apply_phrases(tokenize(topic), phrases);
    VecF query;
    int exclude = kOovId;
    int in_vocab = 0;
    if (merged.size() == 1 && vocab.contains(merged[0])) {
      exclude = vocab.id(merged[0]);
      query = emb.input.row(exclude).transpose();
      in_vocab = 1;
    } else {
      query = VecF::Zero(emb.dim());
      for (const std::string& tok : merged) {
        const int id = vocab.id(tok);
        if (id == kOovId) continue;
        query += emb.input.row(id).transpose();
        ++in_vocab;
      }
      if (in_vocab > 0) query /= static_cast<float>(in_vocab);
    }
    if (in_vocab == 0) {
      throw DataError("topic has no in-vocabulary words: " + topic);
    }
    const std::vector<Neighbor> top =
        nearest_neighbors(query, emb, vocab, k, starts_with_hash, exclude);
    std::vector<std::string>& prov = set.provenance[topic];
    for (const Neighbor& n : top) {
      prov.push_back(n.token);
      if (seen.insert(n.token).second) set.tags.push_back(n.token);
    }
  }
  return set;
}

HashtagCandidateSet select_hashtags_by_frequency(const Vocabulary& vocab,
                                                 int n) {
  HashtagCandidateSet set;
  set.mode = "frequency";
  // Vocabulary ids are already ordered by descending count with
  // lexicographic ties, so a single id scan yields the ranking.
  for (int id = 0; id < vocab.size() && static_cast<int>(set.tags.size()) < n;
       ++id) {
    const std::string& tok = vocab.token(id);
    if (!tok.empty() && tok[0] == '#') set.tags.push_back(tok);
  }
  return set;
}

void save_candidates(const std::string& path, const HashtagCandidateSet& set) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot write: " + path);
  out << "# mode=" << set.mode << "\n";
  for (const std::string& tag : set.tags) out << tag << "\n";
  if (!out) throw DataError("cannot write: " + path);
}

HashtagCandidateSet load_candidates(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open: " + path);
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty candidate file: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  HashtagCandidateSet set;
  if (line.rfind("# mode=", 0) != 0) {
    throw DataError("bad candidate file header: " + path);
  }
  set.mode = line.substr(7);
  if (set.mode != "similarity" && set.mode != "frequency") {
    throw DataError("unknown candidate mode \"" + set.mode + "\": " + path);
  }
  std::set<std::string> seen;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] != '#' || line.size() < 2) {
      throw DataError("candidate is not a hashtag: \"" + line + "\" in " +
                      path);
    }
    if (!seen.insert(line).second) {
      throw DataError("duplicate candidate \"" + line + "\" in " + path);
    }
    set.tags.push_back(line);
  }
  if (set.tags.empty()) throw DataError("empty candidate file: " + path);
  return set;
}

}  // namespace stance
