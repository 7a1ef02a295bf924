#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace listreward {

struct ChatRequest {
  std::string model;
  std::string prompt;
  double temperature = 0.0;
  std::optional<double> top_p;
  std::optional<int> max_tokens;
};

// Network or protocol failure of a single call. Retryable.
class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One chat-completion round trip. Implementations must be callable from
// several threads at once.
class ChatTransport {
 public:
  virtual ~ChatTransport() = default;
  // Returns the assistant message content. Throws TransportError.
  virtual std::string complete(const ChatRequest& request) = 0;
};

// OpenAI-compatible chat completions over HTTP(S). `endpoint` is the API base,
// e.g. "https://api.openai.com/v1"; requests go to <endpoint>/chat/completions.
class OpenAIChatTransport : public ChatTransport {
 public:
  OpenAIChatTransport(std::string endpoint, std::string api_key,
                      std::chrono::milliseconds timeout);
  std::string complete(const ChatRequest& request) override;

  // Serialization used on the wire, exposed for tests.
  static std::string request_body(const ChatRequest& request);
  // Extracts choices[0].message.content. Throws TransportError.
  static std::string parse_response_body(std::string_view body);

 private:
  std::string scheme_host_port_;
  std::string path_prefix_;
  std::string api_key_;
  std::chrono::milliseconds timeout_;
};

inline constexpr const char* kApiKeyEnv = "LISTREWARD_JUDGE_API_KEY";

struct LlmClientConfig {
  std::string endpoint;
  std::string model_name;
  double temperature = 0.0;
  int max_retries = 3;
  int max_in_flight = 4;
  std::chrono::milliseconds timeout{60000};
  std::chrono::milliseconds backoff_base{250};
  std::chrono::milliseconds backoff_max{8000};
  std::optional<int> max_tokens;
  // Exact-request memo: identical prompts are answered from cache.
  bool memoize = false;
};

void validate_config(const LlmClientConfig& config);

class JudgeUnavailable : public std::runtime_error {
 public:
  enum class Reason { kTransport, kUnparsable };
  JudgeUnavailable(Reason reason, const std::string& what)
      : std::runtime_error(what), reason_(reason) {}
  Reason reason() const { return reason_; }

 private:
  Reason reason_;
};

// Counting limiter over concurrent calls that also records the peak.
class InFlightLimiter {
 public:
  explicit InFlightLimiter(int capacity);
  void acquire();
  void release();
  int in_flight() const;
  int peak() const;

 private:
  const int capacity_;
  mutable std::mutex mu_;
  std::condition_variable cv_;
  int in_flight_ = 0;
  int peak_ = 0;
};

// Retrying, rate-limited front end over a ChatTransport. Shareable across
// threads; each query is independent.
class LlmClient {
 public:
  // Returns true when a reply is usable; false triggers a retry.
  using ReplyCheck = std::function<bool(std::string_view)>;
  // Called with the in-flight count right after a call starts.
  using InFlightHook = std::function<void(int)>;

  struct Stats {
    std::int64_t calls = 0;
    std::int64_t transport_failures = 0;
    std::int64_t unusable_replies = 0;
    std::int64_t memo_hits = 0;
    int peak_in_flight = 0;
  };

  LlmClient(LlmClientConfig config, std::shared_ptr<ChatTransport> transport);

  // Sends `prompt` until `accept` approves a reply, at most 1 + max_retries
  // times, sleeping with jittered exponential backoff between attempts.
  // Throws JudgeUnavailable when attempts run out.
  std::string query(const std::string& prompt, const ReplyCheck& accept);
  std::string query(const std::string& prompt, double temperature,
                    const ReplyCheck& accept);

  void set_in_flight_hook(InFlightHook hook);
  Stats stats() const;
  const LlmClientConfig& config() const { return config_; }

 private:
  std::chrono::milliseconds backoff_delay(int attempt) const;

  LlmClientConfig config_;
  std::shared_ptr<ChatTransport> transport_;
  InFlightLimiter limiter_;
  InFlightHook hook_;
  mutable std::mutex stats_mu_;
  Stats stats_;
  std::mutex memo_mu_;
  std::map<std::string, std::string> memo_;
};

// Builds a client against an OpenAI-compatible endpoint, reading the API key
// from LISTREWARD_JUDGE_API_KEY.
std::shared_ptr<LlmClient> make_http_client(const LlmClientConfig& config);

}  // namespace listreward
