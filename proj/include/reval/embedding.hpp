#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace reval {

using Embedding = std::vector<double>;

double l2_norm(const Embedding& v);

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;

  // Embeds non-empty text into a unit-norm vector of dimension(). Throws
  // ProviderError / EmbeddingFailure on failure.
  virtual Embedding embed(const std::string& text) = 0;
  virtual std::size_t dimension() const = 0;
};

// Deterministic offline embedder. The scheme, which tests reproduce
// independently:
//   - tokens are the byte 3-grams of the text; a text shorter than 3 bytes
//     contributes itself as the single token
//   - each token hashes to h = fnv1a64(seed_bytes || token); the vector cell
//     h % dim is incremented by +1 or -1 depending on bit 63 of h
//   - the vector is L2-normalized; an all-zero accumulation falls back to a
//     one-hot vector at fnv1a64(seed_bytes || text) % dim
class MockEmbedder : public EmbeddingProvider {
 public:
  explicit MockEmbedder(std::size_t dim = 64, std::uint64_t seed = 0)
      : dim_(dim), seed_(seed) {}

  Embedding embed(const std::string& text) override;
  std::size_t dimension() const override { return dim_; }
  std::uint64_t seed() const { return seed_; }

 private:
  std::size_t dim_;
  std::uint64_t seed_;
};

}  // namespace reval
