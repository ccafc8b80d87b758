#pragma once

#include <stdexcept>
#include <string>

namespace stance {

// Raised for malformed or unusable input data (bad files, empty corpora,
// contract violations on user-supplied values). The CLI maps this to exit
// code 2; programming errors surface as std::logic_error instead.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace stance
