#include "reval/config.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "reval/assets.hpp"
#include "reval/error.hpp"

namespace reval {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string resolve_path(const fs::path& base_dir, const std::string& path) {
  if (path.empty()) return path;
  fs::path p(path);
  if (p.is_absolute()) return p.string();
  return (base_dir / p).lexically_normal().string();
}

CompletionParams params_from_json(const json& j, const std::string& fallback_model) {
  CompletionParams p;
  p.model_id = j.value("model_id", fallback_model);
  p.temperature = j.value("temperature", 0.0);
  p.max_output_tokens = j.value("max_output_tokens", 2048);
  if (j.contains("seed")) p.seed = j.at("seed").get<std::int64_t>();
  return p;
}

ProviderSpec provider_from_json(const json& j, const fs::path& base_dir) {
  ProviderSpec spec;
  spec.kind = j.value("kind", "");
  if (spec.kind.empty())
    throw Error(ErrorCode::ConfigError, "provider spec needs a 'kind'");
  spec.rules_path = resolve_path(base_dir, j.value("rules", ""));
  spec.script_path = resolve_path(base_dir, j.value("script", ""));
  spec.dim = j.value("dim", std::size_t{64});
  spec.seed = j.value("seed", std::int64_t{0});
  spec.http.base_url = j.value("base_url", "");
  spec.http.chat_path = j.value("chat_path", spec.http.chat_path);
  spec.http.embeddings_path = j.value("embeddings_path", spec.http.embeddings_path);
  spec.http.api_key_env = j.value("api_key_env", "");
  spec.http.embedding_model = j.value("model", "");
  spec.http.max_in_flight = j.value("max_in_flight", spec.http.max_in_flight);
  spec.http.max_attempts = j.value("max_attempts", spec.http.max_attempts);
  spec.http.backoff_base_ms = j.value("backoff_base_ms", spec.http.backoff_base_ms);
  spec.http.timeout_seconds = j.value("timeout_seconds", spec.http.timeout_seconds);
  return spec;
}

std::string fingerprint_provider(const ProviderSpec& spec) {
  std::ostringstream out;
  out << spec.kind;
  if (spec.kind == "mock") out << "(dim=" << spec.dim << ",seed=" << spec.seed << ")";
  if (spec.kind == "http") out << "(" << spec.http.base_url << ")";
  if (!spec.rules_path.empty()) out << "(rules=" << spec.rules_path << ")";
  if (!spec.script_path.empty()) out << "(script=" << spec.script_path << ")";
  return out.str();
}

std::string fingerprint(const RunConfig& config) {
  std::ostringstream out;
  out << "chat=" << fingerprint_provider(config.chat_default);
  if (config.scorer_provider) out << ";scorer=" << fingerprint_provider(*config.scorer_provider);
  if (config.critic_provider) out << ";critic=" << fingerprint_provider(*config.critic_provider);
  if (config.rubric_provider) out << ";rubric=" << fingerprint_provider(*config.rubric_provider);
  out << ";embed=" << fingerprint_provider(config.embedding_provider);
  return out.str();
}

RetrievalConfig retrieval_from_json(const json& j) {
  RetrievalConfig r;
  r.k = j.value("k", std::size_t{1});
  if (r.k < 1) throw Error(ErrorCode::ConfigError, "retrieval k must be >= 1");
  r.similarity_threshold = j.value("similarity_threshold", 0.0);
  if (r.similarity_threshold < -1.0 || r.similarity_threshold > 1.0)
    throw Error(ErrorCode::ConfigError, "similarity_threshold must be in [-1, 1]");
  r.measure = selection_measure_from_name(j.value("measure", "COSINE_ONLY"));
  return r;
}

std::vector<std::string> load_documents(const json& paths, const fs::path& base_dir) {
  std::vector<std::string> docs;
  for (const auto& p : paths)
    docs.push_back(read_text_file(resolve_path(base_dir, p.get<std::string>())));
  return docs;
}

}  // namespace

RunConfig load_run_config(const std::string& path) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError, path + ": bad config JSON: " + e.what());
  }
  const fs::path base_dir = fs::path(path).parent_path();

  RunConfig config;
  try {
    if (!j.contains("chat_provider"))
      throw Error(ErrorCode::ConfigError, "config needs a 'chat_provider'");
    config.chat_default = provider_from_json(j.at("chat_provider"), base_dir);
    if (j.contains("scorer_provider"))
      config.scorer_provider = provider_from_json(j.at("scorer_provider"), base_dir);
    if (j.contains("critic_provider"))
      config.critic_provider = provider_from_json(j.at("critic_provider"), base_dir);
    if (j.contains("rubric_gen_provider"))
      config.rubric_provider = provider_from_json(j.at("rubric_gen_provider"), base_dir);
    if (!j.contains("embedding_provider"))
      throw Error(ErrorCode::ConfigError, "config needs an 'embedding_provider'");
    config.embedding_provider = provider_from_json(j.at("embedding_provider"), base_dir);

    PipelineConfig& p = config.pipeline;
    p.scorer_params = params_from_json(j.value("scorer", json::object()), "scorer-default");
    p.critic_params =
        params_from_json(j.value("critic", json::object()), p.scorer_params.model_id);
    p.rubric_gen_params =
        params_from_json(j.value("rubric_gen", json::object()), p.scorer_params.model_id);

    const json retrieval = j.value("retrieval", json::object());
    auto store_block = [&](const char* name, RetrievalConfig& out, std::string& store_path) {
      if (!retrieval.contains(name)) return;
      const json& block = retrieval.at(name);
      out = retrieval_from_json(block);
      store_path = resolve_path(base_dir, block.value("store", ""));
    };
    store_block("rubric_exemplars", p.rubric_retrieval, config.rubric_store_path);
    store_block("scoring_exemplars", p.scoring_retrieval, config.scoring_store_path);
    store_block("critique_exemplars", p.critique_retrieval, config.critique_store_path);

    p.max_critique_iterations = j.value("max_critique_iterations", 1);
    if (p.max_critique_iterations < 1)
      throw Error(ErrorCode::ConfigError, "max_critique_iterations must be >= 1");
    p.admission_policy = admission_policy_from_name(j.value("admission_policy", "MANUAL"));
    p.prompt_template_set_id = j.value("prompt_template_set", "default");
    config.prompt_template_dir = resolve_path(base_dir, j.value("prompt_template_dir", ""));
    if (config.prompt_template_dir.empty())
      config.prompt_template_dir = asset_dir() + "/prompts/" + p.prompt_template_set_id;

    const json stat = j.value("static_exemplars", json::object());
    p.static_scoring_exemplars = load_documents(stat.value("scoring", json::array()), base_dir);
    p.static_critique_exemplars = load_documents(stat.value("critique", json::array()), base_dir);

    config.domain_note = j.value("domain_note", "");
    p.provider_fingerprint = fingerprint(config);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError, path + ": " + e.what());
  }
  return config;
}

void apply_seed_override(RunConfig& config, std::int64_t seed) {
  config.embedding_provider.seed = seed;
  config.pipeline.scorer_params.seed = seed;
  config.pipeline.critic_params.seed = seed;
  config.pipeline.rubric_gen_params.seed = seed;
  config.pipeline.provider_fingerprint = fingerprint(config);
}

std::shared_ptr<ChatProvider> build_chat_provider(const ProviderSpec& spec) {
  if (spec.kind == "mock-rules") {
    auto provider = std::make_shared<MockChatProvider>(MockChatProvider::rules());
    if (!spec.rules_path.empty()) {
      std::istringstream in(read_text_file(spec.rules_path));
      std::string line;
      std::size_t line_no = 0;
      while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
          const auto j = nlohmann::json::parse(line);
          provider->add_rule(j.at("match").get<std::string>(),
                             j.at("response").get<std::string>());
        } catch (const nlohmann::json::exception& e) {
          throw Error(ErrorCode::ConfigError, spec.rules_path + " line " +
                                                  std::to_string(line_no) + ": " + e.what());
        }
      }
    }
    return provider;
  }
  if (spec.kind == "mock-replay") {
    std::vector<std::string> script;
    if (!spec.script_path.empty()) {
      std::istringstream in(read_text_file(spec.script_path));
      std::string line;
      std::size_t line_no = 0;
      while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
          script.push_back(nlohmann::json::parse(line).at("content").get<std::string>());
        } catch (const nlohmann::json::exception& e) {
          throw Error(ErrorCode::ConfigError, spec.script_path + " line " +
                                                  std::to_string(line_no) + ": " + e.what());
        }
      }
    }
    return std::make_shared<MockChatProvider>(MockChatProvider::replay(std::move(script)));
  }
  if (spec.kind == "http") return std::make_shared<HttpChatProvider>(spec.http);
  throw Error(ErrorCode::ConfigError, "unknown chat provider kind '" + spec.kind + "'");
}

std::shared_ptr<EmbeddingProvider> build_embedding_provider(const ProviderSpec& spec) {
  if (spec.kind == "mock")
    return std::make_shared<MockEmbedder>(spec.dim, static_cast<std::uint64_t>(spec.seed));
  if (spec.kind == "http") return std::make_shared<HttpEmbeddingProvider>(spec.http, spec.dim);
  throw Error(ErrorCode::ConfigError, "unknown embedding provider kind '" + spec.kind + "'");
}

StoreSet load_store_set(const RunConfig& config) {
  StoreSet stores;
  auto load_if = [](const std::string& path, ExemplarStore& out, StoreKind kind) {
    if (path.empty() || !std::filesystem::exists(path)) {
      out.kind = kind;
      return;
    }
    out = load_store(path);
    if (out.kind != kind)
      throw Error(ErrorCode::ConfigError,
                  path + " holds " + store_kind_name(out.kind) + ", expected " +
                      store_kind_name(kind));
  };
  load_if(config.rubric_store_path, stores.rubric_exemplars, StoreKind::RubricExemplars);
  load_if(config.scoring_store_path, stores.scoring_exemplars, StoreKind::ScoringExemplars);
  load_if(config.critique_store_path, stores.critique_exemplars, StoreKind::CritiqueExemplars);
  return stores;
}

Pipeline build_pipeline(const RunConfig& config) {
  auto templates =
      PromptTemplateSet::load(config.prompt_template_dir, config.pipeline.prompt_template_set_id);
  auto stores = load_store_set(config);

  auto default_chat = build_chat_provider(config.chat_default);
  auto scorer =
      config.scorer_provider ? build_chat_provider(*config.scorer_provider) : default_chat;
  auto critic =
      config.critic_provider ? build_chat_provider(*config.critic_provider) : default_chat;
  auto rubric =
      config.rubric_provider ? build_chat_provider(*config.rubric_provider) : default_chat;
  auto embedder = build_embedding_provider(config.embedding_provider);

  return Pipeline(config.pipeline, std::move(templates), std::move(stores), std::move(scorer),
                  std::move(critic), std::move(rubric), std::move(embedder));
}

}  // namespace reval
