#include "stance/labels.hpp"

#include "stance/error.hpp"

namespace stance {

const char* stance_name(int label) {
  switch (label) {
    case kFavor:
      return "FAVOR";
    case kAgainst:
      return "AGAINST";
    case kNone:
      return "NONE";
    default:
      throw DataError("invalid stance label id " + std::to_string(label));
  }
}

int stance_from_name(std::string_view name, const std::string& origin) {
  if (name == "FAVOR") return kFavor;
  if (name == "AGAINST") return kAgainst;
  if (name == "NONE") return kNone;
  throw DataError("invalid stance label \"" + std::string(name) + "\": " +
                  origin);
}

}  // namespace stance
