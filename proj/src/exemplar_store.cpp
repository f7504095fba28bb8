#include "reval/exemplar_store.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "reval/error.hpp"
#include "reval/hash.hpp"

namespace reval {

namespace {

using nlohmann::json;

constexpr int kStoreVersion = 1;

std::string hex_float(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%a", v);
  return buf;
}

double parse_hex_float(const std::string& s) {
  const char* begin = s.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end != begin + s.size())
    throw Error(ErrorCode::FormatError, "bad float literal '" + s + "'");
  return v;
}

void validate_store(const ExemplarStore& store) {
  std::set<std::string> ids;
  std::size_t dim = 0;
  for (const auto& e : store.entries) {
    if (!ids.insert(e.id).second)
      throw Error(ErrorCode::FormatError, "duplicate entry id '" + e.id + "'");
    if (e.embedding.empty())
      throw Error(ErrorCode::FormatError, "entry '" + e.id + "' has empty embedding");
    if (dim == 0) dim = e.embedding.size();
    if (e.embedding.size() != dim)
      throw Error(ErrorCode::FormatError, "entry '" + e.id + "' embedding dimension " +
                                              std::to_string(e.embedding.size()) +
                                              " differs from store dimension " +
                                              std::to_string(dim));
    if (std::fabs(l2_norm(e.embedding) - 1.0) > 1e-9)
      throw Error(ErrorCode::FormatError, "entry '" + e.id + "' embedding is not unit norm");
    if (e.performance && (*e.performance < 0.0 || *e.performance > 1.0))
      throw Error(ErrorCode::FormatError, "entry '" + e.id + "' performance outside [0,1]");
  }
}

}  // namespace

const char* store_kind_name(StoreKind kind) {
  switch (kind) {
    case StoreKind::RubricExemplars: return "RUBRIC_EXEMPLARS";
    case StoreKind::ScoringExemplars: return "SCORING_EXEMPLARS";
    case StoreKind::CritiqueExemplars: return "CRITIQUE_EXEMPLARS";
  }
  return "UNKNOWN";
}

StoreKind store_kind_from_name(const std::string& name) {
  if (name == "RUBRIC_EXEMPLARS") return StoreKind::RubricExemplars;
  if (name == "SCORING_EXEMPLARS") return StoreKind::ScoringExemplars;
  if (name == "CRITIQUE_EXEMPLARS") return StoreKind::CritiqueExemplars;
  throw Error(ErrorCode::FormatError, "unknown store kind '" + name + "'");
}

const char* selection_measure_name(SelectionMeasure m) {
  switch (m) {
    case SelectionMeasure::CosineOnly: return "COSINE_ONLY";
    case SelectionMeasure::Product: return "PRODUCT";
    case SelectionMeasure::GeometricMean: return "GEOMETRIC_MEAN";
  }
  return "UNKNOWN";
}

SelectionMeasure selection_measure_from_name(const std::string& name) {
  if (name == "COSINE_ONLY") return SelectionMeasure::CosineOnly;
  if (name == "PRODUCT") return SelectionMeasure::Product;
  if (name == "GEOMETRIC_MEAN") return SelectionMeasure::GeometricMean;
  throw Error(ErrorCode::ConfigError, "unknown selection measure '" + name + "'");
}

const ExemplarEntry* ExemplarStore::find(const std::string& id) const {
  for (const auto& e : entries)
    if (e.id == id) return &e;
  return nullptr;
}

double cosine_similarity(const Embedding& a, const Embedding& b) {
  if (a.size() != b.size())
    throw Error(ErrorCode::DimensionMismatch, "vector dimensions " + std::to_string(a.size()) +
                                                  " and " + std::to_string(b.size()));
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0 || nb == 0) throw Error(ErrorCode::ZeroVector, "cosine of a zero vector");
  return std::clamp(dot / std::sqrt(na * nb), -1.0, 1.0);
}

double composite_score(double similarity, std::optional<double> performance,
                       SelectionMeasure measure) {
  if (measure == SelectionMeasure::CosineOnly) return similarity;
  if (!performance)
    throw Error(ErrorCode::MissingPerformance,
                std::string(selection_measure_name(measure)) +
                    " selection needs a performance score");
  if (*performance < 0)
    throw Error(ErrorCode::OutOfRange, "performance score is negative");
  const double sim = std::clamp(similarity, 0.0, 1.0);
  if (measure == SelectionMeasure::Product) return sim * *performance;
  return std::sqrt(sim * *performance);
}

std::vector<RetrievalHit> top_k(const ExemplarStore& store, const Embedding& query,
                                const RetrievalConfig& cfg) {
  std::vector<RetrievalHit> hits;
  for (const auto& e : store.entries) {
    if (!e.approved) continue;
    const double sim = cosine_similarity(query, e.embedding);
    hits.push_back({e, sim, composite_score(sim, e.performance, cfg.measure)});
  }
  std::sort(hits.begin(), hits.end(), [](const RetrievalHit& a, const RetrievalHit& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.entry.id < b.entry.id;
  });
  if (hits.size() > cfg.k) hits.resize(cfg.k);
  return hits;
}

std::optional<RetrievalHit> select_exemplar(const ExemplarStore& store, const Embedding& query,
                                            const RetrievalConfig& cfg) {
  RetrievalConfig one = cfg;
  one.k = 1;
  auto hits = top_k(store, query, one);
  if (hits.empty()) return std::nullopt;
  if (hits.front().similarity < cfg.similarity_threshold) return std::nullopt;
  return hits.front();
}

std::string add_entry(ExemplarStore& store, EmbeddingProvider& embedder,
                      const std::string& key_text, const std::string& value_doc,
                      std::optional<double> performance, bool approved,
                      const std::map<std::string, std::string>& metadata,
                      std::int64_t created_at) {
  if (key_text.empty())
    throw Error(ErrorCode::EmbeddingFailure, "exemplar key text must be non-empty");

  ExemplarEntry entry;
  entry.key_text = key_text;
  entry.value_doc = value_doc;
  entry.embedding = embedder.embed(key_text);
  entry.performance = performance;
  entry.approved = approved;
  entry.created_at = created_at;
  entry.metadata = metadata;

  std::uint64_t h = fnv1a64(key_text);
  h = fnv1a64(value_doc, h);
  std::uint64_t suffix = store.entries.size();
  do {
    entry.id = "ex-" + hash_hex(fnv1a64_u64(suffix, h));
    ++suffix;
  } while (store.find(entry.id) != nullptr);

  store.entries.push_back(std::move(entry));
  return store.entries.back().id;
}

std::string serialize_store(const ExemplarStore& store) {
  std::ostringstream out;
  out << json{{"format", "exemplar-store"},
              {"version", kStoreVersion},
              {"kind", store_kind_name(store.kind)}}
             .dump()
      << "\n";
  for (const auto& e : store.entries) {
    json j;
    j["id"] = e.id;
    j["key_text"] = e.key_text;
    j["value_doc"] = e.value_doc;
    json emb = json::array();
    for (double v : e.embedding) emb.push_back(hex_float(v));
    j["embedding"] = emb;
    if (e.performance) j["performance"] = hex_float(*e.performance);
    j["approved"] = e.approved;
    j["created_at"] = e.created_at;
    if (!e.metadata.empty()) j["metadata"] = e.metadata;
    out << j.dump() << "\n";
  }
  return out.str();
}

ExemplarStore deserialize_store(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.empty())
    throw Error(ErrorCode::FormatError, "empty store file");

  json header;
  try {
    header = json::parse(line);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::FormatError, std::string("bad store header: ") + e.what());
  }
  if (header.value("format", "") != "exemplar-store")
    throw Error(ErrorCode::FormatError, "not an exemplar-store file");
  const int version = header.value("version", -1);
  if (version != kStoreVersion)
    throw Error(ErrorCode::FormatError, "store format version " + std::to_string(version) +
                                            " not supported; this build reads version " +
                                            std::to_string(kStoreVersion));

  ExemplarStore store;
  store.kind = store_kind_from_name(header.value("kind", ""));

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::FormatError,
                  "line " + std::to_string(line_no) + ": bad entry JSON: " + e.what());
    }
    ExemplarEntry entry;
    entry.id = j.at("id").get<std::string>();
    entry.key_text = j.at("key_text").get<std::string>();
    entry.value_doc = j.at("value_doc").get<std::string>();
    for (const auto& v : j.at("embedding"))
      entry.embedding.push_back(parse_hex_float(v.get<std::string>()));
    if (j.contains("performance"))
      entry.performance = parse_hex_float(j.at("performance").get<std::string>());
    entry.approved = j.value("approved", false);
    entry.created_at = j.value("created_at", std::int64_t{0});
    if (j.contains("metadata"))
      entry.metadata = j.at("metadata").get<std::map<std::string, std::string>>();
    store.entries.push_back(std::move(entry));
  }
  validate_store(store);
  return store;
}

void save_store(const ExemplarStore& store, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write store: " + path);
  out << serialize_store(store);
  if (!out) throw Error(ErrorCode::IoError, "failed writing store: " + path);
}

ExemplarStore load_store(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read store: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return deserialize_store(buf.str());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::FormatError)
      throw Error(ErrorCode::FormatError, path + ": " + e.what());
    throw;
  }
}

}  // namespace reval
