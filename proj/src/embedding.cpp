#include "reval/embedding.hpp"

#include <cmath>

#include "reval/error.hpp"
#include "reval/hash.hpp"

namespace reval {

double l2_norm(const Embedding& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

Embedding MockEmbedder::embed(const std::string& text) {
  if (text.empty()) throw Error(ErrorCode::EmbeddingFailure, "cannot embed empty text");

  std::string seed_bytes(8, '\0');
  for (int i = 0; i < 8; ++i)
    seed_bytes[static_cast<std::size_t>(i)] = static_cast<char>((seed_ >> (i * 8)) & 0xFF);

  auto token_hash = [&](std::string_view token) {
    return fnv1a64(token, fnv1a64(seed_bytes));
  };

  Embedding v(dim_, 0.0);
  if (text.size() < 3) {
    const std::uint64_t h = token_hash(text);
    v[h % dim_] += (h >> 63) ? -1.0 : 1.0;
  } else {
    for (std::size_t i = 0; i + 3 <= text.size(); ++i) {
      const std::uint64_t h = token_hash(std::string_view(text).substr(i, 3));
      v[h % dim_] += (h >> 63) ? -1.0 : 1.0;
    }
  }

  double norm = l2_norm(v);
  if (norm == 0) {
    const std::uint64_t h = fnv1a64(text, fnv1a64(seed_bytes));
    v.assign(dim_, 0.0);
    v[h % dim_] = 1.0;
    norm = 1.0;
  }
  for (double& x : v) x /= norm;
  return v;
}

}  // namespace reval
