#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace stance {

inline constexpr std::uint64_t kFnvOffset = 14695981039346656037ULL;
inline constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

inline std::uint64_t fnv1a(const void* data, std::size_t n,
                           std::uint64_t h = kFnvOffset) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= kFnvPrime;
  }
  return h;
}

inline std::uint64_t fnv1a(std::string_view s, std::uint64_t h = kFnvOffset) {
  return fnv1a(s.data(), s.size(), h);
}

// Streaming FNV-1a over a file's bytes; throws DataError if unreadable.
std::uint64_t hash_file(const std::string& path);

std::string hex64(std::uint64_t value);

}  // namespace stance
