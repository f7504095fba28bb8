#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "reval/http_provider.hpp"
#include "reval/pipeline.hpp"

namespace reval {

// One chat or embedding provider choice from the config file.
struct ProviderSpec {
  std::string kind;  // "mock-rules" | "mock-replay" | "http" | "mock" (embedder)
  std::string rules_path;
  std::string script_path;
  HttpProviderConfig http;
  std::size_t dim = 64;        // mock embedder
  std::int64_t seed = 0;       // mock embedder
};

// Everything a run needs, loaded from one declarative JSON document.
// Relative paths resolve against the config file's directory.
struct RunConfig {
  PipelineConfig pipeline;
  ProviderSpec chat_default;
  std::optional<ProviderSpec> scorer_provider;   // per-role overrides
  std::optional<ProviderSpec> critic_provider;
  std::optional<ProviderSpec> rubric_provider;
  ProviderSpec embedding_provider;
  std::string prompt_template_dir;  // resolved
  std::string rubric_store_path;    // empty = in-memory empty store
  std::string scoring_store_path;
  std::string critique_store_path;
  std::string domain_note;  // rubric generation system prompt
};

RunConfig load_run_config(const std::string& path);

// Applies the --seed flag: overrides the mock embedder seed and the
// completion seeds, and refreshes the provider fingerprint so the manifest
// records it.
void apply_seed_override(RunConfig& config, std::int64_t seed);

std::shared_ptr<ChatProvider> build_chat_provider(const ProviderSpec& spec);
std::shared_ptr<EmbeddingProvider> build_embedding_provider(const ProviderSpec& spec);

// Loads stores (missing path = empty store), templates, and providers.
Pipeline build_pipeline(const RunConfig& config);

// Store snapshot as configured on disk, for admission writes.
StoreSet load_store_set(const RunConfig& config);

}  // namespace reval
