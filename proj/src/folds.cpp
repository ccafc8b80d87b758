#include "stance/folds.hpp"

#include <numeric>

#include "stance/error.hpp"
#include "stance/nn/loss.hpp"
#include "stance/rng.hpp"

namespace stance {

std::vector<int> FoldAssignment::training_for(int fold) const {
  std::vector<int> train;
  for (int i = 0; i < folds(); ++i) {
    if (i == fold) continue;
    train.insert(train.end(), validation[static_cast<std::size_t>(i)].begin(),
                 validation[static_cast<std::size_t>(i)].end());
  }
  return train;
}

FoldAssignment make_folds(int n, int folds, std::uint64_t seed) {
  if (folds < 2) throw DataError("need at least 2 folds");
  if (n < folds) {
    throw DataError("too few examples: " + std::to_string(n) + " for " +
                    std::to_string(folds) + " folds");
  }
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  Rng rng(mix_seed(seed, "folds"));
  rng.shuffle(order);
  FoldAssignment fa;
  fa.validation.resize(static_cast<std::size_t>(folds));
  for (int i = 0; i < folds; ++i) {
    const int lo = static_cast<int>(static_cast<long>(i) * n / folds);
    const int hi = static_cast<int>(static_cast<long>(i + 1) * n / folds);
    fa.validation[static_cast<std::size_t>(i)].assign(
        order.begin() + lo, order.begin() + hi);
  }
  return fa;
}

VecF class_weights(const std::vector<long>& counts) {
  return inverse_frequency_weights<float>(counts);
}

}  // namespace stance
