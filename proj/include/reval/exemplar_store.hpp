#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "reval/embedding.hpp"

namespace reval {

enum class StoreKind { RubricExemplars, ScoringExemplars, CritiqueExemplars };

const char* store_kind_name(StoreKind kind);
StoreKind store_kind_from_name(const std::string& name);

struct ExemplarEntry {
  std::string id;
  std::string key_text;   // indexed side
  std::string value_doc;  // retrieved side
  Embedding embedding;    // unit norm
  std::optional<double> performance;  // expert satisfaction/accuracy in [0,1]
  bool approved = false;
  std::int64_t created_at = 0;  // unix seconds
  std::map<std::string, std::string> metadata;

  bool operator==(const ExemplarEntry&) const = default;
};

struct ExemplarStore {
  StoreKind kind = StoreKind::ScoringExemplars;
  std::vector<ExemplarEntry> entries;

  bool operator==(const ExemplarStore&) const = default;
  const ExemplarEntry* find(const std::string& id) const;
};

enum class SelectionMeasure { CosineOnly, Product, GeometricMean };

const char* selection_measure_name(SelectionMeasure m);
SelectionMeasure selection_measure_from_name(const std::string& name);

struct RetrievalConfig {
  std::size_t k = 1;
  double similarity_threshold = 0.0;  // in [-1, 1], gates on raw cosine
  SelectionMeasure measure = SelectionMeasure::CosineOnly;
};

// dot(a,b) / sqrt(|a|^2 |b|^2), clamped into [-1, 1].
double cosine_similarity(const Embedding& a, const Embedding& b);

// CosineOnly -> similarity; Product -> sim * perf; GeometricMean ->
// sqrt(sim * perf). Similarity is clamped to [0, 1] first for the
// performance-weighted measures so the geometric mean stays real.
double composite_score(double similarity, std::optional<double> performance,
                       SelectionMeasure measure);

struct RetrievalHit {
  ExemplarEntry entry;
  double similarity = 0;  // raw cosine
  double score = 0;       // composite selection score
};

// Exhaustive scan over approved entries, ranked by composite score descending
// with ties broken by entry id ascending. Returns at most cfg.k hits.
std::vector<RetrievalHit> top_k(const ExemplarStore& store, const Embedding& query,
                                const RetrievalConfig& cfg);

// The best-ranked hit if its raw cosine similarity meets the threshold;
// absence is a normal outcome, not an error.
std::optional<RetrievalHit> select_exemplar(const ExemplarStore& store, const Embedding& query,
                                            const RetrievalConfig& cfg);

// Embeds key_text and appends a new entry; returns its id. Ids are derived
// from the key/value content plus a sequence suffix, so two adds of the same
// key get distinct ids. Unapproved entries are stored but never retrieved.
std::string add_entry(ExemplarStore& store, EmbeddingProvider& embedder,
                      const std::string& key_text, const std::string& value_doc,
                      std::optional<double> performance, bool approved,
                      const std::map<std::string, std::string>& metadata = {},
                      std::int64_t created_at = 0);

// Line-delimited store file: a version header line followed by one JSON
// record per entry; embeddings are stored as hex float strings, so
// load(save(s)) is bit-exact.
std::string serialize_store(const ExemplarStore& store);
ExemplarStore deserialize_store(const std::string& text);
void save_store(const ExemplarStore& store, const std::string& path);
ExemplarStore load_store(const std::string& path);

}  // namespace reval
