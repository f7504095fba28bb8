#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace reval {

// FNV-1a 64-bit. Deterministic fingerprints for manifests and the mock
// embedder; not cryptographic.
constexpr std::uint64_t kFnvOffset = 14695981039346656037ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

constexpr std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h = kFnvOffset) {
  for (char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= kFnvPrime;
  }
  return h;
}

constexpr std::uint64_t fnv1a64_u64(std::uint64_t value, std::uint64_t h = kFnvOffset) {
  for (int i = 0; i < 8; ++i) {
    h ^= (value >> (i * 8)) & 0xFFu;
    h *= kFnvPrime;
  }
  return h;
}

std::string hash_hex(std::uint64_t h);
std::string content_hash(std::string_view bytes);  // fnv1a64 as 16-char hex

}  // namespace reval
