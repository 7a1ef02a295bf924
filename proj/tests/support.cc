#include "support.h"

#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "httplib.h"
#include "json.hpp"
#include "listreward/commands.h"
#include "listreward/text.h"

namespace testing_support {

namespace fs = std::filesystem;
using listreward::normalize;

fs::path source_dir() { return LISTREWARD_SOURCE_DIR; }
fs::path data_dir() { return source_dir() / "tests" / "data"; }
listreward::AssetStore shipped_assets() {
  return listreward::AssetStore(source_dir() / "assets");
}

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  std::random_device rd;
  path_ = fs::temp_directory_path() /
          ("listreward_test_" + std::to_string(rd()) + "_" +
           std::to_string(counter++));
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  f << text;
}

namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

// Lines after `header` up to the next blank line.
std::vector<std::string> block_after(const std::vector<std::string>& lines,
                                     const std::string& header) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i] != header) continue;
    for (std::size_t j = i + 1; j < lines.size() && !lines[j].empty(); ++j) {
      out.push_back(lines[j]);
    }
    return out;
  }
  return out;
}

std::optional<std::string> gold_of(const std::vector<std::string>& lines) {
  for (const char* header : {"Reference answer:", "Correct answer:"}) {
    auto block = block_after(lines, header);
    if (!block.empty()) return block.front();
  }
  for (const auto& l : lines) {
    if (l.rfind("Correct answer: ", 0) == 0) return l.substr(16);
  }
  return std::nullopt;
}

bool hits(const std::string& candidate, const std::string& gold) {
  return normalize(candidate).find(normalize(gold)) != std::string::npos;
}

std::string strip_number(const std::string& line) {
  std::size_t i = 0;
  while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) ++i;
  if (i > 0 && i + 1 < line.size() && line[i] == '.' && line[i + 1] == ' ') {
    return line.substr(i + 2);
  }
  return line;
}

}  // namespace

std::string exact_match_judge_reply(const std::string& prompt) {
  auto lines = lines_of(prompt);
  auto gold = gold_of(lines);
  if (!gold) return "no gold found";

  auto list = block_after(lines, "Candidate answers:");
  if (!list.empty()) {
    for (std::size_t k = 0; k < list.size(); ++k) {
      if (hits(strip_number(list[k]), *gold)) {
        return "Matched.\nRANK: " + std::to_string(k + 1);
      }
    }
    return "Nothing matched.\nRANK: none";
  }
  auto single = block_after(lines, "Candidate answer:");
  if (!single.empty()) {
    bool yes = false;
    for (const auto& l : single) yes = yes || hits(l, *gold);
    return yes ? "EQUIVALENT: yes" : "EQUIVALENT: no";
  }
  auto given = block_after(lines, "Final answer given in the response:");
  auto ranked = block_after(lines, "Ranked list given in the response:");
  for (const auto& l : given) {
    if (hits(l, *gold)) return "VERDICT: correct";
  }
  for (const auto& l : ranked) {
    if (hits(strip_number(l), *gold)) return "VERDICT: correct";
  }
  return "VERDICT: incorrect";
}

std::shared_ptr<listreward::LlmClient> make_client(
    std::shared_ptr<listreward::ChatTransport> transport, int max_in_flight,
    int max_retries) {
  listreward::LlmClientConfig c;
  c.endpoint = "mock://judge";
  c.model_name = "mock";
  c.max_in_flight = max_in_flight;
  c.max_retries = max_retries;
  c.backoff_base = std::chrono::milliseconds(1);
  c.backoff_max = std::chrono::milliseconds(2);
  return std::make_shared<listreward::LlmClient>(c, std::move(transport));
}

std::shared_ptr<listreward::LlmClient> exact_match_judge_client(
    int max_in_flight) {
  auto t = std::make_shared<FnTransport>(
      [](const listreward::ChatRequest& r) { return exact_match_judge_reply(r.prompt); });
  return make_client(t, max_in_flight);
}

MockOpenAIServer::MockOpenAIServer(Handler handler)
    : handler_(std::move(handler)), server_(std::make_unique<httplib::Server>()) {
  server_->Post("/v1/chat/completions",
                [this](const httplib::Request& req, httplib::Response& res) {
                  ++calls_;
                  auto body = nlohmann::json::parse(req.body);
                  std::string prompt = body.at("messages").at(0).at("content");
                  auto reply = handler_(prompt);
                  if (!reply) {
                    res.status = 500;
                    res.set_content("{\"error\":\"mock\"}", "application/json");
                    return;
                  }
                  nlohmann::json out;
                  out["choices"] = nlohmann::json::array(
                      {{{"message", {{"role", "assistant"}, {"content", *reply}}}}});
                  res.set_content(out.dump(), "application/json");
                });
  port_ = server_->bind_to_any_port("127.0.0.1");
  if (port_ < 0) throw std::runtime_error("mock server cannot bind");
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
}

MockOpenAIServer::~MockOpenAIServer() {
  server_->stop();
  if (thread_.joinable()) thread_.join();
}

std::string MockOpenAIServer::endpoint() const {
  return "http://127.0.0.1:" + std::to_string(port_) + "/v1";
}

CliResult run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = listreward::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace testing_support
