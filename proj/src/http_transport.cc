#include "httplib.h"
#include "json.hpp"
#include "listreward/llm_client.h"

namespace listreward {

using json = nlohmann::json;

OpenAIChatTransport::OpenAIChatTransport(std::string endpoint,
                                         std::string api_key,
                                         std::chrono::milliseconds timeout)
    : api_key_(std::move(api_key)), timeout_(timeout) {
  while (!endpoint.empty() && endpoint.back() == '/') endpoint.pop_back();
  std::size_t scheme = endpoint.find("://");
  if (scheme == std::string::npos) {
    throw std::invalid_argument("endpoint must start with http:// or https://");
  }
  std::size_t path = endpoint.find('/', scheme + 3);
  if (path == std::string::npos) {
    scheme_host_port_ = endpoint;
    path_prefix_ = "";
  } else {
    scheme_host_port_ = endpoint.substr(0, path);
    path_prefix_ = endpoint.substr(path);
  }
}

std::string OpenAIChatTransport::request_body(const ChatRequest& request) {
  json body;
  body["model"] = request.model;
  body["messages"] = json::array({{{"role", "user"}, {"content", request.prompt}}});
  body["temperature"] = request.temperature;
  if (request.top_p) body["top_p"] = *request.top_p;
  if (request.max_tokens) body["max_tokens"] = *request.max_tokens;
  return body.dump();
}

std::string OpenAIChatTransport::parse_response_body(std::string_view body) {
  json parsed = json::parse(body, nullptr, false);
  if (parsed.is_discarded()) throw TransportError("response is not JSON");
  try {
    const json& content = parsed.at("choices").at(0).at("message").at("content");
    if (!content.is_string()) throw TransportError("message content is not text");
    return content.get<std::string>();
  } catch (const json::exception& e) {
    throw TransportError(std::string("malformed completion: ") + e.what());
  }
}

std::string OpenAIChatTransport::complete(const ChatRequest& request) {
  httplib::Client client(scheme_host_port_);
  auto seconds = std::chrono::duration_cast<std::chrono::seconds>(timeout_);
  auto usec = std::chrono::duration_cast<std::chrono::microseconds>(timeout_ - seconds);
  client.set_connection_timeout(seconds.count(), usec.count());
  client.set_read_timeout(seconds.count(), usec.count());
  client.set_write_timeout(seconds.count(), usec.count());
  httplib::Headers headers;
  if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);
  auto res = client.Post(path_prefix_ + "/chat/completions", headers,
                         request_body(request), "application/json");
  if (!res) {
    throw TransportError("request failed: " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw TransportError("HTTP " + std::to_string(res->status) + ": " +
                         res->body.substr(0, 200));
  }
  return parse_response_body(res->body);
}

}  // namespace listreward
