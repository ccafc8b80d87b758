#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace stance {

// Ordered token list; tokens are lowercase and contain no whitespace.
using TokenSequence = std::vector<std::string>;

inline constexpr const char* kUrlToken = "<url>";

// Lowercases, splits on whitespace, detaches leading/trailing punctuation
// into separate tokens ("#" and "@" prefixes stay attached), and replaces
// URLs with the "<url>" placeholder. Idempotent on its own output.
TokenSequence tokenize(std::string_view text);

std::string join_tokens(const TokenSequence& tokens);

// Tokens beginning with '#'.
std::vector<std::string> hashtag_tokens(const TokenSequence& tokens);

bool is_punct_only(std::string_view token);

}  // namespace stance
