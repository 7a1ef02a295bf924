#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "listreward/assets.h"
#include "listreward/llm_client.h"
#include "listreward/records.h"

namespace listreward {

inline constexpr double kDefaultConfidenceThreshold = 0.7;
inline constexpr double kConversionTemperature = 0.1;
inline constexpr const char* kConversionAsset = "convert/mcq_to_qa";

class ReplyParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ConversionVerdict {
  bool convertible = false;
  std::optional<std::string> converted_question;
  double confidence = 0.0;
  std::string rationale;
};

// Parses the last JSON object in the reply with fields {convertible,
// question, confidence, rationale}. Absent when the object is missing or
// breaks its schema.
std::optional<ConversionVerdict> parse_conversion_reply(std::string_view text);

std::string render_conversion_prompt(const QuestionRecord& record,
                                     const AssetStore& assets);

struct ConversionResult {
  std::string source_id;
  ConversionVerdict verdict;
  // QA record carrying the gold option's text; set when convertible.
  std::optional<QuestionRecord> record;
};

// One LLM call per record (plus retries on garbled replies). Throws
// IncompatibleFormat for non-MCQ input, JudgeUnavailable on transport
// exhaustion and ReplyParseError when no reply parsed.
ConversionResult convert_mcq(const QuestionRecord& record, LlmClient& client,
                             const AssetStore& assets,
                             double temperature = kConversionTemperature);

// Keeps convertible results with confidence >= threshold, in input order.
std::vector<ConversionResult> filter_by_confidence(
    const std::vector<ConversionResult>& results, double threshold);

}  // namespace listreward
