#pragma once

#include <atomic>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "listreward/assets.h"
#include "listreward/llm_client.h"
#include "listreward/records.h"

namespace httplib {
class Server;
}

namespace listreward {

inline constexpr int kWireVersion = 1;

struct ServiceOptions {
  // Records addressable by record_id in score requests.
  std::vector<QuestionRecord> dataset;
  // Judge used for list-judge-mrr requests; shared by all requests.
  std::shared_ptr<LlmClient> judge;
  std::filesystem::path asset_dir = LISTREWARD_DEFAULT_ASSET_DIR;
  unsigned workers = 1;
};

// Stateless batch scoring over HTTP:
//   POST /v1/score   {"v":1, "config":{...}, "pairs":[...]}
//   GET  /v1/health
//   GET  /v1/config
class ScoringService {
 public:
  struct Reply {
    int status = 200;
    std::string body;
  };

  explicit ScoringService(ServiceOptions options);
  ~ScoringService();
  ScoringService(const ScoringService&) = delete;
  ScoringService& operator=(const ScoringService&) = delete;

  // Request handlers, usable without a socket.
  Reply score(std::string_view body) const;
  Reply health() const;
  Reply config() const;

  // Binds and serves until stop(); returns false when binding fails.
  bool listen(const std::string& host, int port);
  // Binds to an ephemeral port and returns it, or -1.
  int bind_ephemeral(const std::string& host);
  // Serves on a socket bound by bind_ephemeral.
  bool serve_bound();
  // Stops accepting connections; in-flight requests finish first.
  void stop();
  bool running() const;

 private:
  void install_routes();

  ServiceOptions options_;
  AssetStore assets_;
  std::map<std::string, const QuestionRecord*> by_id_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace listreward
