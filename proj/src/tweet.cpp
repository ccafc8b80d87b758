#include "stance/tweet.hpp"

#include <cctype>
#include <fstream>
#include <unordered_set>

#include <json.hpp>

#include "stance/error.hpp"

namespace stance {

namespace {

using nlohmann::json;

json parse_line(const std::string& line, const std::string& path,
                std::size_t line_no) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw DataError(path + ": malformed JSON at line " +
                    std::to_string(line_no));
  }
  return j;
}

std::string required_string(const json& j, const char* key,
                            const std::string& path, std::size_t line_no) {
  if (!j.contains(key) || !j[key].is_string()) {
    throw DataError(path + ": missing field \"" + key + "\" at line " +
                    std::to_string(line_no));
  }
  return j[key].get<std::string>();
}

std::string optional_string(const json& j, const char* key) {
  if (j.contains(key) && j[key].is_string()) return j[key].get<std::string>();
  return {};
}

std::string trimmed(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

bool starts_with_rt_at(const std::string& text) {
  std::string head = trimmed(text).substr(0, 4);
  for (char& c : head) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return head == "rt @";
}

template <class Fn>
void for_each_line(const std::string& path, Fn fn) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read file: " + path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    fn(line, line_no);
  }
}

}  // namespace

std::vector<TweetRecord> read_tweets_jsonl(const std::string& path) {
  std::vector<TweetRecord> out;
  for_each_line(path, [&](const std::string& line, std::size_t line_no) {
    json j = parse_line(line, path, line_no);
    TweetRecord rec;
    rec.id = required_string(j, "id", path, line_no);
    rec.text = required_string(j, "text", path, line_no);
    rec.topic = optional_string(j, "topic");
    rec.stance = optional_string(j, "stance");
    if (rec.id.empty()) {
      throw DataError(path + ": empty id at line " + std::to_string(line_no));
    }
    if (trimmed(rec.text).empty()) {
      throw DataError(path + ": empty text at line " + std::to_string(line_no));
    }
    out.push_back(std::move(rec));
  });
  return out;
}

void write_tweets_jsonl(const std::string& path,
                        const std::vector<TweetRecord>& records) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);
  for (const auto& rec : records) {
    json j{{"id", rec.id}, {"text", rec.text}};
    if (!rec.topic.empty()) j["topic"] = rec.topic;
    if (!rec.stance.empty()) j["stance"] = rec.stance;
    out << j.dump() << '\n';
  }
}

std::vector<PreparedTweet> read_prepared_jsonl(const std::string& path) {
  std::vector<PreparedTweet> out;
  for_each_line(path, [&](const std::string& line, std::size_t line_no) {
    json j = parse_line(line, path, line_no);
    PreparedTweet rec;
    rec.id = required_string(j, "id", path, line_no);
    if (!j.contains("tokens") || !j["tokens"].is_array()) {
      throw DataError(path + ": missing field \"tokens\" at line " +
                      std::to_string(line_no));
    }
    for (const auto& t : j["tokens"]) {
      if (!t.is_string()) {
        throw DataError(path + ": non-string token at line " +
                        std::to_string(line_no));
      }
      rec.tokens.push_back(t.get<std::string>());
    }
    rec.topic = optional_string(j, "topic");
    rec.stance = optional_string(j, "stance");
    out.push_back(std::move(rec));
  });
  return out;
}

void write_prepared_jsonl(const std::string& path,
                          const std::vector<PreparedTweet>& records) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);
  for (const auto& rec : records) {
    json j{{"id", rec.id}, {"tokens", rec.tokens}};
    if (!rec.topic.empty()) j["topic"] = rec.topic;
    if (!rec.stance.empty()) j["stance"] = rec.stance;
    out << j.dump() << '\n';
  }
}

std::vector<TweetRecord> filter_stream(const std::vector<TweetRecord>& records,
                                       FilterStats* stats) {
  std::vector<TweetRecord> out;
  std::unordered_set<std::string> seen;
  FilterStats local;
  for (const auto& rec : records) {
    if (starts_with_rt_at(rec.text)) {
      ++local.retweets_dropped;
      continue;
    }
    if (!seen.insert(rec.text).second) {
      ++local.duplicates_dropped;
      continue;
    }
    out.push_back(rec);
  }
  if (stats != nullptr) *stats = local;
  return out;
}

}  // namespace stance
