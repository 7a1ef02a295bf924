#include "listreward/responses.h"

#include <fstream>
#include <set>

#include "json.hpp"
#include "listreward/records.h"
#include "listreward/text.h"

namespace listreward {

using json = nlohmann::ordered_json;

std::vector<ResponseLine> load_responses(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open responses " + path.string());
  std::vector<ResponseLine> out;
  std::set<std::string> ids;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (trim(text).empty()) continue;
    json obj = json::parse(text, nullptr, false);
    if (obj.is_discarded() || !obj.is_object()) {
      throw SchemaError(line, "<line>", "invalid JSON object");
    }
    ResponseLine r;
    r.line = line;
    auto id = obj.find("id");
    if (id == obj.end() || !id->is_string()) {
      throw SchemaError(line, "id", "missing or not a string");
    }
    r.record_id = id->get<std::string>();
    auto resp = obj.find("response");
    if (resp == obj.end() || !resp->is_string()) {
      throw SchemaError(line, "response", "missing or not a string");
    }
    r.text = resp->get<std::string>();
    if (auto t = obj.find("tokens"); t != obj.end() && !t->is_null()) {
      if (!t->is_number_integer() || t->get<std::int64_t>() < 0) {
        throw SchemaError(line, "tokens", "must be a nonnegative integer");
      }
      r.tokens = t->get<std::int64_t>();
    }
    if (!ids.insert(r.record_id).second) {
      throw SchemaError(line, "id", "duplicate response for '" + r.record_id + "'");
    }
    out.push_back(std::move(r));
  }
  return out;
}

void save_responses(const std::filesystem::path& path,
                    const std::vector<ResponseLine>& responses) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (const auto& r : responses) {
    json obj;
    obj["id"] = r.record_id;
    obj["response"] = r.text;
    if (r.tokens) obj["tokens"] = *r.tokens;
    out << obj.dump() << '\n';
  }
}

}  // namespace listreward
