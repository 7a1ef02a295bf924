#pragma once

#include <atomic>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "listreward/assets.h"
#include "listreward/llm_client.h"
#include "listreward/records.h"

namespace httplib {
class Server;
}

namespace testing_support {

std::filesystem::path source_dir();
std::filesystem::path data_dir();
listreward::AssetStore shipped_assets();

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const {
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
};

void write_file(const std::filesystem::path& path, const std::string& text);

// Judge stand-in that reads the rendered judge/validation prompt back and
// answers by normalized containment of the gold, the same predicate the
// exact-match rewards use.
std::string exact_match_judge_reply(const std::string& prompt);

// Transport answering from a function, with call counting.
class FnTransport : public listreward::ChatTransport {
 public:
  using Fn = std::function<std::string(const listreward::ChatRequest&)>;
  explicit FnTransport(Fn fn) : fn_(std::move(fn)) {}
  std::string complete(const listreward::ChatRequest& request) override {
    ++calls;
    return fn_(request);
  }
  std::atomic<int> calls{0};

 private:
  Fn fn_;
};

std::shared_ptr<listreward::LlmClient> make_client(
    std::shared_ptr<listreward::ChatTransport> transport, int max_in_flight = 4,
    int max_retries = 3);
std::shared_ptr<listreward::LlmClient> exact_match_judge_client(
    int max_in_flight = 4);

// Local OpenAI-compatible server. The handler maps a prompt to the assistant
// content; returning nullopt answers HTTP 500.
class MockOpenAIServer {
 public:
  using Handler = std::function<std::optional<std::string>(const std::string&)>;
  explicit MockOpenAIServer(Handler handler);
  ~MockOpenAIServer();
  std::string endpoint() const;
  int calls() const { return calls_; }

 private:
  Handler handler_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = -1;
  std::atomic<int> calls_{0};
};

// Runs the CLI in-process.
struct CliResult {
  int code;
  std::string out;
  std::string err;
};
CliResult run_cli(const std::vector<std::string>& args);

}  // namespace testing_support
