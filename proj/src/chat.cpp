#include "reval/chat.hpp"

#include <sstream>

#include <nlohmann/json.hpp>

#include "reval/error.hpp"

namespace reval {

const char* chat_role_name(ChatRole role) {
  switch (role) {
    case ChatRole::System: return "system";
    case ChatRole::User: return "user";
    case ChatRole::Assistant: return "assistant";
  }
  return "unknown";
}

ChatRole chat_role_from_name(const std::string& name) {
  if (name == "system") return ChatRole::System;
  if (name == "user") return ChatRole::User;
  if (name == "assistant") return ChatRole::Assistant;
  throw Error(ErrorCode::FormatError, "unknown chat role '" + name + "'");
}

namespace {

void check_content(const std::string& content) {
  if (content.empty())
    throw Error(ErrorCode::ValidationError, "chat message content must be non-empty");
}

}  // namespace

Transcript& Transcript::system(std::string content) {
  check_content(content);
  if (!messages.empty())
    throw Error(ErrorCode::ValidationError, "system message must come first");
  messages.push_back({ChatRole::System, std::move(content)});
  return *this;
}

Transcript& Transcript::user(std::string content) {
  check_content(content);
  messages.push_back({ChatRole::User, std::move(content)});
  return *this;
}

Transcript& Transcript::assistant(std::string content) {
  check_content(content);
  messages.push_back({ChatRole::Assistant, std::move(content)});
  return *this;
}

std::string Transcript::joined_text() const {
  std::ostringstream out;
  for (const auto& m : messages)
    out << "[" << chat_role_name(m.role) << "]\n" << m.content << "\n";
  return out.str();
}

std::string transcript_to_json(const Transcript& transcript) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& m : transcript.messages)
    j.push_back({{"role", chat_role_name(m.role)}, {"content", m.content}});
  return j.dump();
}

Transcript transcript_from_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::FormatError, std::string("bad transcript JSON: ") + e.what());
  }
  Transcript t;
  for (const auto& m : j) {
    t.messages.push_back({chat_role_from_name(m.at("role").get<std::string>()),
                          m.at("content").get<std::string>()});
  }
  return t;
}

MockChatProvider MockChatProvider::replay(std::vector<std::string> script) {
  MockChatProvider p(Mode::Replay);
  p.script_ = std::move(script);
  return p;
}

void MockChatProvider::add_rule(std::string match_substring, std::string response) {
  std::lock_guard<std::mutex> lock(mutex_);
  rules_.push_back({std::move(match_substring), std::move(response)});
}

std::size_t MockChatProvider::calls_made() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return calls_;
}

std::size_t MockChatProvider::script_remaining() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return script_.size() - next_;
}

ChatMessage MockChatProvider::complete(const Transcript& transcript,
                                       const CompletionParams& params) {
  (void)params;
  if (transcript.empty())
    throw Error(ErrorCode::ProviderError, "transcript must be non-empty");

  std::lock_guard<std::mutex> lock(mutex_);
  ++calls_;
  if (mode_ == Mode::Rules) {
    const std::string text = transcript.joined_text();
    for (const auto& rule : rules_) {
      if (text.find(rule.match) != std::string::npos)
        return {ChatRole::Assistant, rule.response};
    }
    throw Error(ErrorCode::ProviderError, "no mock rule matched the transcript");
  }
  if (next_ >= script_.size())
    throw Error(ErrorCode::ProviderError,
                "mock replay script exhausted after " + std::to_string(script_.size()) +
                    " messages");
  return {ChatRole::Assistant, script_[next_++]};
}

}  // namespace reval
