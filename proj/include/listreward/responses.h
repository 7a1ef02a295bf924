#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace listreward {

// One line of a responses JSONL file: {"id", "response", "tokens"?}.
struct ResponseLine {
  std::string record_id;
  std::string text;
  std::optional<std::int64_t> tokens;
  std::size_t line = 0;
};

// Throws SchemaError (including duplicate ids, reported against field "id").
std::vector<ResponseLine> load_responses(const std::filesystem::path& path);
void save_responses(const std::filesystem::path& path,
                    const std::vector<ResponseLine>& responses);

}  // namespace listreward
