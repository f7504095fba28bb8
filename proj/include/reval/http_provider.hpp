#pragma once

#include <condition_variable>
#include <mutex>
#include <string>

#include "reval/chat.hpp"
#include "reval/embedding.hpp"

namespace reval {

// Remote endpoint configuration. API keys are read from the named environment
// variable, never from config values.
struct HttpProviderConfig {
  std::string base_url;  // e.g. "http://127.0.0.1:8080"
  std::string chat_path = "/v1/chat/completions";
  std::string embeddings_path = "/v1/embeddings";
  std::string api_key_env;       // empty = no auth header
  std::string embedding_model;   // model id for the embeddings endpoint
  int max_in_flight = 4;
  int max_attempts = 3;          // total tries on transient failures
  int backoff_base_ms = 1000;    // doubled per retry
  int timeout_seconds = 60;
};

// Chat-completions client: request carries the model id and role/content
// message list, response carries choices[0].message.content. Transient
// failures (transport errors, 429, 5xx) are retried with capped exponential
// backoff; a still-rate-limited call surfaces RateLimited.
class HttpChatProvider : public ChatProvider {
 public:
  explicit HttpChatProvider(HttpProviderConfig config);

  ChatMessage complete(const Transcript& transcript, const CompletionParams& params) override;
  std::string name() const override { return "http:" + config_.base_url; }

 private:
  friend class InFlightGuard;
  HttpProviderConfig config_;
  std::mutex mutex_;
  std::condition_variable slot_available_;
  int in_flight_ = 0;
};

// Embeddings endpoint client (input text list -> vector list); the returned
// vector is L2-normalized.
class HttpEmbeddingProvider : public EmbeddingProvider {
 public:
  HttpEmbeddingProvider(HttpProviderConfig config, std::size_t dimension);

  Embedding embed(const std::string& text) override;
  std::size_t dimension() const override { return dimension_; }

 private:
  HttpProviderConfig config_;
  std::size_t dimension_;
};

}  // namespace reval
