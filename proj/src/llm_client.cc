#include "listreward/llm_client.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>
#include <thread>

namespace listreward {

void validate_config(const LlmClientConfig& config) {
  if (config.temperature < 0.0) {
    throw std::invalid_argument("temperature must be >= 0");
  }
  if (config.max_in_flight < 1) {
    throw std::invalid_argument("max_in_flight must be >= 1");
  }
  if (config.max_retries < 0) {
    throw std::invalid_argument("max_retries must be >= 0");
  }
}

InFlightLimiter::InFlightLimiter(int capacity) : capacity_(capacity) {}

void InFlightLimiter::acquire() {
  std::unique_lock<std::mutex> lock(mu_);
  cv_.wait(lock, [&] { return in_flight_ < capacity_; });
  ++in_flight_;
  peak_ = std::max(peak_, in_flight_);
}

void InFlightLimiter::release() {
  {
    std::lock_guard<std::mutex> lock(mu_);
    --in_flight_;
  }
  cv_.notify_one();
}

int InFlightLimiter::in_flight() const {
  std::lock_guard<std::mutex> lock(mu_);
  return in_flight_;
}

int InFlightLimiter::peak() const {
  std::lock_guard<std::mutex> lock(mu_);
  return peak_;
}

LlmClient::LlmClient(LlmClientConfig config,
                     std::shared_ptr<ChatTransport> transport)
    : config_(std::move(config)),
      transport_(std::move(transport)),
      limiter_((validate_config(config_), config_.max_in_flight)) {}

void LlmClient::set_in_flight_hook(InFlightHook hook) { hook_ = std::move(hook); }

LlmClient::Stats LlmClient::stats() const {
  std::lock_guard<std::mutex> lock(stats_mu_);
  Stats s = stats_;
  s.peak_in_flight = limiter_.peak();
  return s;
}

std::chrono::milliseconds LlmClient::backoff_delay(int attempt) const {
  if (config_.backoff_base.count() <= 0) return std::chrono::milliseconds(0);
  thread_local std::mt19937_64 rng{std::random_device{}()};
  double exp = static_cast<double>(config_.backoff_base.count()) *
               std::pow(2.0, attempt);
  double capped = std::min(exp, static_cast<double>(config_.backoff_max.count()));
  std::uniform_real_distribution<double> jitter(0.5, 1.0);
  return std::chrono::milliseconds(static_cast<long long>(capped * jitter(rng)));
}

std::string LlmClient::query(const std::string& prompt,
                             const ReplyCheck& accept) {
  return query(prompt, config_.temperature, accept);
}

std::string LlmClient::query(const std::string& prompt, double temperature,
                             const ReplyCheck& accept) {
  if (config_.memoize) {
    std::lock_guard<std::mutex> lock(memo_mu_);
    if (auto it = memo_.find(prompt); it != memo_.end()) {
      std::lock_guard<std::mutex> s(stats_mu_);
      ++stats_.memo_hits;
      return it->second;
    }
  }

  ChatRequest request;
  request.model = config_.model_name;
  request.prompt = prompt;
  request.temperature = temperature;
  request.max_tokens = config_.max_tokens;

  bool last_was_transport = true;
  std::string last_error = "no attempt made";
  const int attempts = 1 + config_.max_retries;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    if (attempt > 0) std::this_thread::sleep_for(backoff_delay(attempt - 1));
    std::string reply;
    bool transport_ok = true;
    limiter_.acquire();
    {
      std::lock_guard<std::mutex> s(stats_mu_);
      ++stats_.calls;
    }
    if (hook_) hook_(limiter_.in_flight());
    try {
      reply = transport_->complete(request);
    } catch (const TransportError& e) {
      transport_ok = false;
      last_error = e.what();
    }
    limiter_.release();

    if (!transport_ok) {
      std::lock_guard<std::mutex> s(stats_mu_);
      ++stats_.transport_failures;
      last_was_transport = true;
      continue;
    }
    if (!accept(reply)) {
      std::lock_guard<std::mutex> s(stats_mu_);
      ++stats_.unusable_replies;
      last_was_transport = false;
      last_error = "unusable reply";
      continue;
    }
    if (config_.memoize) {
      std::lock_guard<std::mutex> lock(memo_mu_);
      memo_.emplace(prompt, reply);
    }
    return reply;
  }
  throw JudgeUnavailable(
      last_was_transport ? JudgeUnavailable::Reason::kTransport
                         : JudgeUnavailable::Reason::kUnparsable,
      "LLM call failed after " + std::to_string(attempts) +
          " attempts: " + last_error);
}

std::shared_ptr<LlmClient> make_http_client(const LlmClientConfig& config) {
  const char* key = std::getenv(kApiKeyEnv);
  auto transport = std::make_shared<OpenAIChatTransport>(
      config.endpoint, key ? key : "", config.timeout);
  return std::make_shared<LlmClient>(config, std::move(transport));
}

}  // namespace listreward
