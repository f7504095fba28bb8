#include "reval/hash.hpp"

namespace reval {

std::string hash_hex(std::uint64_t h) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[h & 0xF];
    h >>= 4;
  }
  return out;
}

std::string content_hash(std::string_view bytes) { return hash_hex(fnv1a64(bytes)); }

}  // namespace reval
