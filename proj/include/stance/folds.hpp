#pragma once

#include <cstdint>
#include <vector>

#include "stance/types.hpp"

namespace stance {

// validation[i] holds the example indices of fold i's held-out chunk; fold i
// trains on every other chunk.
struct FoldAssignment {
  std::vector<std::vector<int>> validation;

  int folds() const { return static_cast<int>(validation.size()); }
  std::vector<int> training_for(int fold) const;
};

// Seeded shuffle of [0, n) cut into `folds` contiguous chunks whose sizes
// differ by at most one.
FoldAssignment make_folds(int n, int folds, std::uint64_t seed);

// w_c = N / (classes * max(1, n_c)).
VecF class_weights(const std::vector<long>& counts);

}  // namespace stance
