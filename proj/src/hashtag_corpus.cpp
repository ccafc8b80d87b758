#include "stance/hashtag_corpus.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include "stance/error.hpp"
#include "stance/rng.hpp"

#include <nlohmann/json.hpp>

namespace stance {
namespace {

struct Group {
  std::vector<HashtagExample> members;
  double quota = 0.0;
  int dev_take = 0;
};

}  // namespace

HashtagCorpus extract_hashtag_corpus(const std::vector<PreparedTweet>& tweets,
                                     const HashtagCandidateSet& candidates,
                                     const Vocabulary& vocab,
                                     double split_ratio, std::uint64_t seed,
                                     int max_len, int min_stratum) {
  if (candidates.tags.empty()) throw DataError("empty candidate set");
  if (split_ratio <= 0.0 || split_ratio >= 1.0) {
    throw DataError("split ratio must lie in (0, 1)");
  }
  // Candidate rank: by corpus frequency, i.e. vocabulary order.
  std::map<std::string, int> candidate_index;
  std::map<std::string, long> candidate_count;
  for (std::size_t i = 0; i < candidates.tags.size(); ++i) {
    const std::string& tag = candidates.tags[i];
    const int vid = vocab.id(tag);
    if (vid == kOovId) {
      throw DataError("candidate not in vocabulary: " + tag);
    }
    candidate_index[tag] = static_cast<int>(i);
    candidate_count[tag] = vocab.count(vid);
  }

  std::vector<HashtagExample> extracted;
  for (const PreparedTweet& tweet : tweets) {
    const std::string* best_tag = nullptr;
    for (const std::string& tok : tweet.tokens) {
      const auto it = candidate_count.find(tok);
      if (it == candidate_count.end()) continue;
      if (best_tag == nullptr) {
        best_tag = &it->first;
        continue;
      }
      const long cur = candidate_count.at(*best_tag);
      if (it->second > cur ||
          (it->second == cur && vocab.id(it->first) < vocab.id(*best_tag))) {
        best_tag = &it->first;
      }
    }
    if (best_tag == nullptr) continue;
    TokenSequence kept;
    for (const std::string& tok : tweet.tokens) {
      if (!tok.empty() && tok[0] == '#') continue;
      kept.push_back(tok);
    }
    if (kept.empty()) continue;
    HashtagExample ex;
    ex.id = tweet.id;
    ex.ids = encode(kept, vocab, max_len);
    ex.target = candidate_index.at(*best_tag);
    extracted.push_back(std::move(ex));
  }
  if (extracted.empty()) throw DataError("no tweets contain a candidate tag");

  Rng rng(mix_seed(seed, "hashtag-split"));
  rng.shuffle(extracted);

  const long n = static_cast<long>(extracted.size());
  const long dev_target =
      n - std::lround(split_ratio * static_cast<double>(n));

  // Group by label when the label is frequent enough to stratify; pool the
  // rest. Groups keep the shuffled order, so taking a prefix is random.
  std::map<int, std::vector<HashtagExample>> by_label;
  for (HashtagExample& ex : extracted) {
    by_label[ex.target].push_back(std::move(ex));
  }
  std::vector<Group> groups;
  Group rest;
  for (auto& [label, members] : by_label) {
    if (static_cast<int>(members.size()) >= min_stratum) {
      Group g;
      g.members = std::move(members);
      groups.push_back(std::move(g));
    } else {
      for (HashtagExample& ex : members) {
        rest.members.push_back(std::move(ex));
      }
    }
  }
  if (!rest.members.empty()) groups.push_back(std::move(rest));

  // Largest-remainder allocation of dev slots across groups.
  long assigned = 0;
  for (Group& g : groups) {
    g.quota = (1.0 - split_ratio) * static_cast<double>(g.members.size());
    g.dev_take = static_cast<int>(g.quota);
    assigned += g.dev_take;
  }
  while (assigned < dev_target) {
    Group* pick = nullptr;
    double best_frac = -1.0;
    for (Group& g : groups) {
      if (g.dev_take >= static_cast<int>(g.members.size())) continue;
      const double frac = g.quota - static_cast<double>(g.dev_take);
      if (frac > best_frac) {
        best_frac = frac;
        pick = &g;
      }
    }
    if (pick == nullptr) break;
    ++pick->dev_take;
    ++assigned;
  }
  while (assigned > dev_target) {
    Group* pick = nullptr;
    double worst_frac = 2.0;
    for (Group& g : groups) {
      if (g.dev_take <= 0) continue;
      const double frac = g.quota - static_cast<double>(g.dev_take);
      if (frac < worst_frac) {
        worst_frac = frac;
        pick = &g;
      }
    }
    if (pick == nullptr) break;
    --pick->dev_take;
    --assigned;
  }

  HashtagCorpus corpus;
  corpus.num_labels = static_cast<int>(candidates.tags.size());
  for (Group& g : groups) {
    for (std::size_t i = 0; i < g.members.size(); ++i) {
      if (static_cast<int>(i) < g.dev_take) {
        corpus.dev.push_back(std::move(g.members[i]));
      } else {
        corpus.train.push_back(std::move(g.members[i]));
      }
    }
  }
  return corpus;
}

namespace {

void write_split(std::ofstream& out, const std::vector<HashtagExample>& set,
                 const char* split, const Vocabulary& vocab,
                 const HashtagCandidateSet& candidates) {
  for (const HashtagExample& ex : set) {
    nlohmann::json j;
    j["id"] = ex.id;
    j["tokens"] = decode(ex.ids, vocab);
    j["target"] = candidates.tags[static_cast<std::size_t>(ex.target)];
    j["split"] = split;
    out << j.dump() << "\n";
  }
}

}  // namespace

void save_hashtag_corpus(const std::string& path, const HashtagCorpus& corpus,
                         const Vocabulary& vocab,
                         const HashtagCandidateSet& candidates) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot write: " + path);
  write_split(out, corpus.train, "train", vocab, candidates);
  write_split(out, corpus.dev, "dev", vocab, candidates);
  if (!out) throw DataError("cannot write: " + path);
}

HashtagCorpus load_hashtag_corpus(const std::string& path,
                                  const Vocabulary& vocab,
                                  const HashtagCandidateSet& candidates,
                                  int max_len) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open: " + path);
  HashtagCorpus corpus;
  corpus.num_labels = static_cast<int>(candidates.tags.size());
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw DataError(path + " line " + std::to_string(line_no) + ": " +
                      e.what());
    }
    HashtagExample ex;
    ex.id = j.at("id").get<std::string>();
    const TokenSequence tokens = j.at("tokens").get<TokenSequence>();
    if (tokens.empty()) {
      throw DataError(path + " line " + std::to_string(line_no) +
                      ": empty token list");
    }
    ex.ids = encode(tokens, vocab, max_len);
    const std::string target = j.at("target").get<std::string>();
    ex.target = candidates.index_of(target);
    if (ex.target < 0) {
      throw DataError(path + " line " + std::to_string(line_no) +
                      ": target not in candidate set: " + target);
    }
    const std::string split = j.at("split").get<std::string>();
    if (split == "train") {
      corpus.train.push_back(std::move(ex));
    } else if (split == "dev") {
      corpus.dev.push_back(std::move(ex));
    } else {
      throw DataError(path + " line " + std::to_string(line_no) +
                      ": unknown split: " + split);
    }
  }
  if (corpus.train.empty() && corpus.dev.empty()) {
    throw DataError("empty hashtag corpus: " + path);
  }
  return corpus;
}

}  // namespace stance
