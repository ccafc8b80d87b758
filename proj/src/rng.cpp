#include "stance/rng.hpp"

#include "stance/hash.hpp"

namespace stance {

std::uint64_t mix_seed(std::uint64_t seed, std::string_view tag) {
  std::uint64_t h = fnv1a(&seed, sizeof(seed));
  h = fnv1a(tag, h);
  // A zero seed would collapse mt19937_64 to its default stream.
  return h == 0 ? kFnvOffset : h;
}

}  // namespace stance
