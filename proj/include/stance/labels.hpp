#pragma once

#include <string>
#include <string_view>

namespace stance {

enum StanceLabel : int { kFavor = 0, kAgainst = 1, kNone = 2 };

inline constexpr int kNumStanceClasses = 3;

// "FAVOR", "AGAINST", "NONE".
const char* stance_name(int label);

// Parses an exact label name; throws DataError mentioning origin otherwise.
int stance_from_name(std::string_view name, const std::string& origin);

}  // namespace stance
