#include "listreward/records.h"

#include <fstream>
#include <set>

#include "json.hpp"
#include "listreward/text.h"

namespace listreward {

using json = nlohmann::ordered_json;

std::string_view to_string(AnswerFormat format) {
  switch (format) {
    case AnswerFormat::kMcq: return "mcq";
    case AnswerFormat::kQa: return "qa";
    case AnswerFormat::kList: return "list";
  }
  return "unknown";
}

std::optional<AnswerFormat> parse_answer_format(std::string_view name) {
  if (name == "mcq") return AnswerFormat::kMcq;
  if (name == "qa") return AnswerFormat::kQa;
  if (name == "list") return AnswerFormat::kList;
  return std::nullopt;
}

std::string QuestionRecord::option_labels() const {
  std::string labels;
  for (const auto& [label, text] : options) labels.push_back(label);
  return labels;
}

const std::string* QuestionRecord::option_text(char label) const {
  for (const auto& [l, text] : options) {
    if (l == label) return &text;
  }
  return nullptr;
}

SchemaError::SchemaError(std::size_t line, std::string field,
                         const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": field '" + field +
                         "': " + what),
      line_(line),
      field_(std::move(field)) {}

DuplicateId::DuplicateId(std::size_t line, std::string id)
    : std::runtime_error("line " + std::to_string(line) +
                         ": duplicate record id '" + id + "'"),
      line_(line),
      id_(std::move(id)) {}

void validate_record(const QuestionRecord& r, std::size_t line) {
  if (r.record_id.empty()) throw SchemaError(line, "id", "must be non-empty");
  if (r.format == AnswerFormat::kMcq) {
    if (r.options.empty()) {
      throw SchemaError(line, "options", "required for mcq records");
    }
    if (r.gold.size() != 1 || r.option_text(r.gold[0]) == nullptr) {
      throw SchemaError(line, "gold", "must be one of the option letters");
    }
  } else {
    if (trim(r.gold).empty()) throw SchemaError(line, "gold", "must be non-empty");
    if (r.valid_answers) {
      std::string g = normalize(r.gold);
      bool found = false;
      for (const auto& v : *r.valid_answers) {
        if (normalize(v) == g) {
          found = true;
          break;
        }
      }
      if (!found) {
        throw SchemaError(line, "valid_answers", "must contain the gold answer");
      }
    }
  }
  std::set<char> seen;
  for (const auto& [label, text] : r.options) {
    if (label < 'A' || label > 'Z' || !seen.insert(label).second) {
      throw SchemaError(line, "options", "keys must be distinct uppercase letters");
    }
  }
}

namespace {

std::string require_string(const json& obj, const char* field,
                           std::size_t line) {
  auto it = obj.find(field);
  if (it == obj.end()) throw SchemaError(line, field, "missing");
  if (!it->is_string()) throw SchemaError(line, field, "must be a string");
  return it->get<std::string>();
}

}  // namespace

QuestionRecord record_from_json_line(const std::string& text, std::size_t line) {
  json obj;
  try {
    obj = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(line, "<line>", std::string("invalid JSON: ") + e.what());
  }
  if (!obj.is_object()) throw SchemaError(line, "<line>", "must be an object");

  QuestionRecord r;
  r.record_id = require_string(obj, "id", line);
  r.benchmark = require_string(obj, "benchmark", line);
  r.question = require_string(obj, "question", line);
  r.gold = require_string(obj, "gold", line);
  std::string format = require_string(obj, "format", line);
  auto parsed = parse_answer_format(format);
  if (!parsed) throw SchemaError(line, "format", "must be mcq, qa or list");
  r.format = *parsed;

  if (auto it = obj.find("options"); it != obj.end() && !it->is_null()) {
    if (!it->is_object()) throw SchemaError(line, "options", "must be an object");
    for (const auto& [key, value] : it->items()) {
      if (key.size() != 1) {
        throw SchemaError(line, "options", "keys must be single letters");
      }
      if (!value.is_string()) {
        throw SchemaError(line, "options", "values must be strings");
      }
      r.options.emplace_back(key[0], value.get<std::string>());
    }
  }
  if (auto it = obj.find("valid_answers"); it != obj.end() && !it->is_null()) {
    if (!it->is_array()) {
      throw SchemaError(line, "valid_answers", "must be an array of strings");
    }
    std::vector<std::string> valid;
    for (const auto& v : *it) {
      if (!v.is_string()) {
        throw SchemaError(line, "valid_answers", "must be an array of strings");
      }
      valid.push_back(v.get<std::string>());
    }
    if (valid.empty()) throw SchemaError(line, "valid_answers", "must be non-empty");
    r.valid_answers = std::move(valid);
  }
  if (auto it = obj.find("conversion"); it != obj.end() && !it->is_null()) {
    if (!it->is_object() || !it->contains("confidence") ||
        !(*it)["confidence"].is_number() || !it->contains("rationale") ||
        !(*it)["rationale"].is_string()) {
      throw SchemaError(line, "conversion",
                        "must hold numeric confidence and string rationale");
    }
    r.conversion = ConversionMeta{(*it)["confidence"].get<double>(),
                                  (*it)["rationale"].get<std::string>()};
  }
  validate_record(r, line);
  return r;
}

std::string record_to_json_line(const QuestionRecord& r) {
  json obj;
  obj["id"] = r.record_id;
  obj["benchmark"] = r.benchmark;
  obj["question"] = r.question;
  if (!r.options.empty()) {
    json options = json::object();
    for (const auto& [label, text] : r.options) {
      options[std::string(1, label)] = text;
    }
    obj["options"] = std::move(options);
  }
  obj["gold"] = r.gold;
  if (r.valid_answers) obj["valid_answers"] = *r.valid_answers;
  obj["format"] = std::string(to_string(r.format));
  if (r.conversion) {
    obj["conversion"] = {{"confidence", r.conversion->confidence},
                         {"rationale", r.conversion->rationale}};
  }
  return obj.dump();
}

std::vector<QuestionRecord> load_records(
    const std::filesystem::path& path,
    std::optional<AnswerFormat> expected_format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open dataset " + path.string());
  std::vector<QuestionRecord> records;
  std::set<std::string> ids;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (trim(text).empty()) continue;
    QuestionRecord r = record_from_json_line(text, line);
    if (expected_format && r.format != *expected_format) {
      throw SchemaError(line, "format",
                        "expected " + std::string(to_string(*expected_format)));
    }
    if (!ids.insert(r.record_id).second) throw DuplicateId(line, r.record_id);
    records.push_back(std::move(r));
  }
  return records;
}

void save_records(const std::filesystem::path& path,
                  const std::vector<QuestionRecord>& records) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (const auto& r : records) out << record_to_json_line(r) << '\n';
}

}  // namespace listreward
