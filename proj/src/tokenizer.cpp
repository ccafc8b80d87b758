#include "stance/tokenizer.hpp"

#include <cctype>

namespace stance {

namespace {

bool is_punct(char c) {
  return std::ispunct(static_cast<unsigned char>(c)) != 0;
}

bool is_url(std::string_view t) {
  return t.starts_with("http://") || t.starts_with("https://") ||
         t.starts_with("www.");
}

void emit_token(std::string_view raw, TokenSequence& out) {
  if (raw.empty()) return;
  if (raw == kUrlToken) {
    out.emplace_back(kUrlToken);
    return;
  }
  // Leading punctuation becomes standalone tokens; '#' and '@' prefixes
  // stay attached to the word that follows.
  std::size_t begin = 0;
  while (begin < raw.size() && is_punct(raw[begin]) && raw[begin] != '#' &&
         raw[begin] != '@') {
    out.emplace_back(1, raw[begin]);
    ++begin;
  }
  std::string_view core = raw.substr(begin);
  if (core.empty()) return;
  if (is_url(core)) {
    out.emplace_back(kUrlToken);
    return;
  }
  std::size_t end = core.size();
  while (end > 0 && is_punct(core[end - 1])) --end;
  std::string_view trail = core.substr(end);
  core = core.substr(0, end);
  if (core.empty() && !trail.empty()) {
    // Nothing but punctuation left ("#", "@!", ...): the first char kept its
    // prefix status, the rest detaches.
    out.emplace_back(1, trail[0]);
    trail.remove_prefix(1);
  }
  if (!core.empty()) out.emplace_back(core);
  for (char c : trail) out.emplace_back(1, c);
}

}  // namespace

TokenSequence tokenize(std::string_view text) {
  std::string lower(text);
  for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));

  TokenSequence out;
  std::size_t i = 0;
  while (i < lower.size()) {
    while (i < lower.size() && std::isspace(static_cast<unsigned char>(lower[i]))) ++i;
    std::size_t j = i;
    while (j < lower.size() && !std::isspace(static_cast<unsigned char>(lower[j]))) ++j;
    if (j > i) emit_token(std::string_view(lower).substr(i, j - i), out);
    i = j;
  }
  return out;
}

std::string join_tokens(const TokenSequence& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out += ' ';
    out += tokens[i];
  }
  return out;
}

std::vector<std::string> hashtag_tokens(const TokenSequence& tokens) {
  std::vector<std::string> tags;
  for (const auto& t : tokens) {
    if (!t.empty() && t[0] == '#') tags.push_back(t);
  }
  return tags;
}

bool is_punct_only(std::string_view token) {
  if (token.empty()) return false;
  for (char c : token) {
    if (!is_punct(c)) return false;
  }
  return true;
}

}  // namespace stance
