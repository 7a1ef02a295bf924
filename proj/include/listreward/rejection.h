#pragma once

#include <functional>
#include <optional>
#include <string>

#include "listreward/assets.h"
#include "listreward/llm_client.h"
#include "listreward/records.h"

namespace listreward {

inline constexpr int kDefaultRejectionBudget = 20;
inline constexpr double kDistillationTemperature = 0.7;
inline constexpr int kDistillationMaxTokens = 8192;

// Decides whether a teacher response is an acceptable answer for a record.
class ResponseValidator {
 public:
  virtual ~ResponseValidator() = default;
  virtual bool accept(const QuestionRecord& record,
                      const std::string& response) = 0;
};

// MCQ: exact choice match.
class ExactChoiceValidator : public ResponseValidator {
 public:
  bool accept(const QuestionRecord& record,
              const std::string& response) override;
};

// QA and list answers checked by an LLM with the validation prompts. The reply
// must end with "VERDICT: correct" or "VERDICT: incorrect".
class JudgeValidator : public ResponseValidator {
 public:
  JudgeValidator(LlmClient& client, const AssetStore& assets);
  bool accept(const QuestionRecord& record,
              const std::string& response) override;

  std::string render(const QuestionRecord& record,
                     const std::string& response) const;
  static std::optional<bool> parse_verdict(std::string_view reply);

 private:
  LlmClient& client_;
  const AssetStore& assets_;
};

// Exact matching for MCQ records and the judge for QA and list records. The
// judge may be omitted when only MCQ records are validated.
class FormatValidator : public ResponseValidator {
 public:
  FormatValidator(LlmClient* judge_client, const AssetStore* assets);
  bool accept(const QuestionRecord& record,
              const std::string& response) override;

 private:
  ExactChoiceValidator exact_;
  std::optional<JudgeValidator> judge_;
};

struct RejectionResult {
  bool accepted = false;
  int attempts_used = 0;
  std::optional<std::string> response;
};

// Produces attempt number `attempt` (2, 3, ...).
using Regenerate = std::function<std::string(int attempt)>;

// Validates `candidate`, then regenerated responses, until one is accepted or
// `budget` attempts are spent. Throws std::invalid_argument for budget < 1 and
// propagates JudgeUnavailable.
RejectionResult rejection_validate(const QuestionRecord& record,
                                   std::string candidate,
                                   ResponseValidator& validator, int budget,
                                   const Regenerate& regenerate);

}  // namespace listreward
