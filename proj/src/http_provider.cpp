#include "reval/http_provider.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "reval/error.hpp"

namespace reval {

namespace {

using nlohmann::json;

struct HttpOutcome {
  bool transport_ok = false;
  int status = 0;
  std::string body;
  std::string transport_error;
};

bool is_transient(const HttpOutcome& o) {
  if (!o.transport_ok) return true;
  return o.status == 429 || (o.status >= 500 && o.status < 600);
}

HttpOutcome post_json(const HttpProviderConfig& config, const std::string& path,
                      const json& request) {
  httplib::Client client(config.base_url);
  client.set_connection_timeout(config.timeout_seconds, 0);
  client.set_read_timeout(config.timeout_seconds, 0);

  httplib::Headers headers;
  if (!config.api_key_env.empty()) {
    const char* key = std::getenv(config.api_key_env.c_str());
    if (!key || !*key)
      throw Error(ErrorCode::ConfigError,
                  "environment variable " + config.api_key_env + " is not set");
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }

  HttpOutcome outcome;
  auto res = client.Post(path, headers, request.dump(), "application/json");
  if (!res) {
    outcome.transport_error = httplib::to_string(res.error());
    return outcome;
  }
  outcome.transport_ok = true;
  outcome.status = res->status;
  outcome.body = res->body;
  return outcome;
}

// Retries transient failures with exponential backoff, then surfaces
// RateLimited (last failure was 429) or ProviderError.
HttpOutcome post_with_retry(const HttpProviderConfig& config, const std::string& path,
                            const json& request) {
  HttpOutcome outcome;
  for (int attempt = 0; attempt < config.max_attempts; ++attempt) {
    if (attempt > 0) {
      const auto delay = std::chrono::milliseconds(
          static_cast<long>(config.backoff_base_ms * std::pow(2.0, attempt - 1)));
      std::this_thread::sleep_for(delay);
    }
    outcome = post_json(config, path, request);
    if (outcome.transport_ok && outcome.status >= 200 && outcome.status < 300) return outcome;
    if (!is_transient(outcome)) break;
  }
  if (outcome.transport_ok && outcome.status == 429)
    throw Error(ErrorCode::RateLimited,
                "still rate limited after " + std::to_string(config.max_attempts) + " attempts");
  if (!outcome.transport_ok)
    throw Error(ErrorCode::ProviderError, "transport failure: " + outcome.transport_error);
  throw Error(ErrorCode::ProviderError,
              "endpoint returned HTTP " + std::to_string(outcome.status) + ": " + outcome.body);
}

}  // namespace

// RAII slot in the provider's in-flight budget.
class InFlightGuard {
 public:
  explicit InFlightGuard(HttpChatProvider& provider) : provider_(provider) {
    std::unique_lock<std::mutex> lock(provider_.mutex_);
    provider_.slot_available_.wait(
        lock, [&] { return provider_.in_flight_ < provider_.config_.max_in_flight; });
    ++provider_.in_flight_;
  }
  ~InFlightGuard() {
    {
      std::lock_guard<std::mutex> lock(provider_.mutex_);
      --provider_.in_flight_;
    }
    provider_.slot_available_.notify_one();
  }

 private:
  HttpChatProvider& provider_;
};

HttpChatProvider::HttpChatProvider(HttpProviderConfig config) : config_(std::move(config)) {
  if (config_.base_url.empty())
    throw Error(ErrorCode::ConfigError, "http provider needs a base_url");
}

ChatMessage HttpChatProvider::complete(const Transcript& transcript,
                                       const CompletionParams& params) {
  if (transcript.empty())
    throw Error(ErrorCode::ProviderError, "transcript must be non-empty");

  json request;
  request["model"] = params.model_id;
  request["temperature"] = params.temperature;
  request["max_tokens"] = params.max_output_tokens;
  if (params.seed) request["seed"] = *params.seed;
  request["messages"] = json::array();
  for (const auto& m : transcript.messages)
    request["messages"].push_back({{"role", chat_role_name(m.role)}, {"content", m.content}});

  InFlightGuard guard(*this);
  const HttpOutcome outcome = post_with_retry(config_, config_.chat_path, request);

  try {
    const json response = json::parse(outcome.body);
    const auto& choices = response.at("choices");
    if (!choices.is_array() || choices.empty())
      throw Error(ErrorCode::EmptyCompletion, "response has no choices");
    const std::string content = choices.at(0).at("message").at("content").get<std::string>();
    if (content.empty()) throw Error(ErrorCode::EmptyCompletion, "assistant content is empty");
    return {ChatRole::Assistant, content};
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ProviderError, std::string("malformed completion response: ") + e.what(),
                outcome.body);
  }
}

HttpEmbeddingProvider::HttpEmbeddingProvider(HttpProviderConfig config, std::size_t dimension)
    : config_(std::move(config)), dimension_(dimension) {
  if (config_.base_url.empty())
    throw Error(ErrorCode::ConfigError, "http embedding provider needs a base_url");
}

Embedding HttpEmbeddingProvider::embed(const std::string& text) {
  if (text.empty()) throw Error(ErrorCode::EmbeddingFailure, "cannot embed empty text");

  json request;
  request["model"] = config_.embedding_model;
  request["input"] = json::array({text});

  const HttpOutcome outcome = post_with_retry(config_, config_.embeddings_path, request);
  try {
    const json response = json::parse(outcome.body);
    const auto& vector_json = response.at("data").at(0).at("embedding");
    Embedding v;
    v.reserve(vector_json.size());
    for (const auto& x : vector_json) v.push_back(x.get<double>());
    if (v.size() != dimension_)
      throw Error(ErrorCode::EmbeddingFailure,
                  "endpoint returned dimension " + std::to_string(v.size()) + ", expected " +
                      std::to_string(dimension_));
    const double norm = l2_norm(v);
    if (norm == 0) throw Error(ErrorCode::EmbeddingFailure, "endpoint returned a zero vector");
    for (double& x : v) x /= norm;
    return v;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::EmbeddingFailure,
                std::string("malformed embeddings response: ") + e.what(), outcome.body);
  }
}

}  // namespace reval
