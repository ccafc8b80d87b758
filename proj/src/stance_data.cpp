#include "stance/stance_data.hpp"

#include <algorithm>
#include <fstream>

#include "stance/error.hpp"
#include "stance/tokenizer.hpp"

namespace stance {
namespace {

constexpr const char* kHeader = "ID\tTarget\tTweet\tStance";

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return fields;
}

}  // namespace

std::vector<TweetRecord> read_semeval_tsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open: " + path);
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty file: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kHeader) {
    throw DataError("bad header in " + path + ": expected \"" +
                    std::string(kHeader) + "\"");
  }
  std::vector<TweetRecord> rows;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_tabs(line);
    if (fields.size() != 4) {
      throw DataError(path + " line " + std::to_string(line_no) +
                      ": expected 4 tab-separated fields, got " +
                      std::to_string(fields.size()));
    }
    TweetRecord row;
    row.id = fields[0];
    row.topic = fields[1];
    row.text = fields[2];
    row.stance = fields[3];
    if (row.id.empty()) {
      throw DataError(path + " line " + std::to_string(line_no) +
                      ": empty ID");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_semeval_tsv(const std::string& path,
                       const std::vector<TweetRecord>& rows) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot write: " + path);
  out << kHeader << "\n";
  for (const TweetRecord& row : rows) {
    out << row.id << '\t' << row.topic << '\t' << row.text << '\t'
        << row.stance << "\n";
  }
  if (!out) throw DataError("cannot write: " + path);
}

std::vector<StanceExample> make_stance_examples(
    const std::vector<TweetRecord>& rows, const Vocabulary& vocab,
    const PhraseModel& phrases, const std::vector<std::string>& stop_tokens,
    int max_len, bool require_label) {
  std::vector<StanceExample> examples;
  examples.reserve(rows.size());
  for (const TweetRecord& row : rows) {
    TokenSequence tokens = apply_phrases(tokenize(row.text), phrases);
    if (!stop_tokens.empty()) {
      tokens.erase(std::remove_if(tokens.begin(), tokens.end(),
                                  [&](const std::string& t) {
                                    return std::find(stop_tokens.begin(),
                                                     stop_tokens.end(),
                                                     t) != stop_tokens.end();
                                  }),
                   tokens.end());
    }
    StanceExample ex;
    ex.id = row.id;
    ex.topic = row.topic;
    ex.ids = tokens.empty() ? std::vector<int>{kOovId}
                            : encode(tokens, vocab, max_len);
    if (require_label) {
      ex.gold = stance_from_name(row.stance, "row " + row.id);
    }
    examples.push_back(std::move(ex));
  }
  return examples;
}

}  // namespace stance
