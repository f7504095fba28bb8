#pragma once

#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace reval {

enum class ChatRole { System, User, Assistant };

const char* chat_role_name(ChatRole role);
ChatRole chat_role_from_name(const std::string& name);

struct ChatMessage {
  ChatRole role = ChatRole::User;
  std::string content;  // non-empty

  bool operator==(const ChatMessage&) const = default;
};

// Ordered message list. If a system message exists it is the first message.
struct Transcript {
  std::vector<ChatMessage> messages;

  bool operator==(const Transcript&) const = default;

  Transcript& system(std::string content);
  Transcript& user(std::string content);
  Transcript& assistant(std::string content);
  bool empty() const { return messages.empty(); }

  // All contents joined with role markers; what mock rules match against.
  std::string joined_text() const;
};

// JSON array of {role, content} objects; the audit-trail payload format.
std::string transcript_to_json(const Transcript& transcript);
Transcript transcript_from_json(const std::string& json_text);

struct CompletionParams {
  std::string model_id;
  double temperature = 0.0;  // pipeline calls default to 0 for reproducibility
  int max_output_tokens = 2048;
  std::optional<std::int64_t> seed;
};

class ChatProvider {
 public:
  virtual ~ChatProvider() = default;

  // Returns the assistant message for a non-empty transcript. Never mutates
  // the transcript. Throws ProviderError / RateLimited / EmptyCompletion.
  virtual ChatMessage complete(const Transcript& transcript, const CompletionParams& params) = 0;
  virtual std::string name() const = 0;
};

// Deterministic offline provider with two modes:
//   RULES  — substring pattern -> response template; patterns are checked in
//            registration order and the first match against the joined
//            transcript text wins. A pure function of (rules, transcript).
//   REPLAY — a fixed script; the nth call returns the nth message and an
//            exhausted script is a ProviderError. Calls are serialized.
class MockChatProvider : public ChatProvider {
 public:
  enum class Mode { Rules, Replay };

  static MockChatProvider rules() { return MockChatProvider(Mode::Rules); }
  static MockChatProvider replay(std::vector<std::string> script);

  void add_rule(std::string match_substring, std::string response);
  std::size_t calls_made() const;
  std::size_t script_remaining() const;

  ChatMessage complete(const Transcript& transcript, const CompletionParams& params) override;
  std::string name() const override { return mode_ == Mode::Rules ? "mock-rules" : "mock-replay"; }

 private:
  explicit MockChatProvider(Mode mode) : mode_(mode) {}

  struct Rule {
    std::string match;
    std::string response;
  };

  Mode mode_;
  std::vector<Rule> rules_;
  std::vector<std::string> script_;
  std::size_t next_ = 0;
  std::size_t calls_ = 0;
  mutable std::mutex mutex_;
};

}  // namespace reval
