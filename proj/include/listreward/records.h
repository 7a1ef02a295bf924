#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "listreward/types.h"

namespace listreward {

// Provenance of a record produced by MCQ-to-QA conversion.
struct ConversionMeta {
  double confidence = 0.0;
  std::string rationale;
  bool operator==(const ConversionMeta&) const = default;
};

struct QuestionRecord {
  std::string record_id;
  std::string benchmark;
  std::string question;
  // Option letter -> option text, in file order.
  std::vector<std::pair<char, std::string>> options;
  // Option letter for MCQ, answer text otherwise.
  std::string gold;
  std::optional<std::vector<std::string>> valid_answers;
  AnswerFormat format = AnswerFormat::kQa;
  std::optional<ConversionMeta> conversion;

  // Concatenated option letters, e.g. "ABCD".
  std::string option_labels() const;
  const std::string* option_text(char label) const;

  bool operator==(const QuestionRecord&) const = default;
};

class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::size_t line, std::string field, const std::string& what);
  std::size_t line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  std::size_t line_;
  std::string field_;
};

class DuplicateId : public std::runtime_error {
 public:
  DuplicateId(std::size_t line, std::string id);
  std::size_t line() const { return line_; }
  const std::string& id() const { return id_; }

 private:
  std::size_t line_;
  std::string id_;
};

// Throws SchemaError when a record breaks the format invariants.
void validate_record(const QuestionRecord& record, std::size_t line = 0);

// Parses one JSONL line. `line` is 1-based and only used for errors.
QuestionRecord record_from_json_line(const std::string& text, std::size_t line);
std::string record_to_json_line(const QuestionRecord& record);

// Reads a dataset JSONL file. Blank lines are skipped but still counted for
// error line numbers.
std::vector<QuestionRecord> load_records(
    const std::filesystem::path& path,
    std::optional<AnswerFormat> expected_format = std::nullopt);

void save_records(const std::filesystem::path& path,
                  const std::vector<QuestionRecord>& records);

}  // namespace listreward
