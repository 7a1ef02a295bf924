#include "listreward/rejection.h"

#include <cctype>
#include <stdexcept>

#include "listreward/parse.h"
#include "listreward/reward.h"
#include "listreward/text.h"

namespace listreward {

bool ExactChoiceValidator::accept(const QuestionRecord& record,
                                  const std::string& response) {
  if (record.format != AnswerFormat::kMcq) {
    throw IncompatibleFormat("exact choice validation needs an MCQ record");
  }
  auto choice = extract_choice(answer_region(response), record.option_labels());
  return reward_mcq(choice, record.gold.at(0)) == 1;
}

JudgeValidator::JudgeValidator(LlmClient& client, const AssetStore& assets)
    : client_(client), assets_(assets) {}

std::string JudgeValidator::render(const QuestionRecord& record,
                                   const std::string& response) const {
  const char* asset = record.format == AnswerFormat::kList
                          ? "validate/sft_validate_list"
                          : "validate/sft_validate";
  std::string gold = record.gold;
  if (record.format == AnswerFormat::kMcq) {
    if (const std::string* text = record.option_text(record.gold.at(0))) {
      gold += ". " + *text;
    }
  }
  return substitute(assets_.get(asset),
                    {{"question", record.question},
                     {"gold", gold},
                     {"response", std::string(trim(answer_region(response)))}});
}

std::optional<bool> JudgeValidator::parse_verdict(std::string_view reply) {
  constexpr std::string_view kMarker = "verdict:";
  std::optional<bool> found;
  std::size_t start = 0;
  while (start <= reply.size()) {
    std::size_t nl = reply.find('\n', start);
    std::size_t end = nl == std::string_view::npos ? reply.size() : nl;
    std::string line;
    for (char c : reply.substr(start, end - start)) {
      if (c == '*' || c == '`' || c == '#') continue;
      line.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    std::string_view l = trim(line);
    if (l.substr(0, kMarker.size()) == kMarker) {
      std::string_view value = trim(l.substr(kMarker.size()));
      while (!value.empty() && value.back() == '.') value.remove_suffix(1);
      if (value == "correct") {
        found = true;
      } else if (value == "incorrect") {
        found = false;
      } else {
        found.reset();
      }
    }
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  return found;
}

bool JudgeValidator::accept(const QuestionRecord& record,
                            const std::string& response) {
  std::string reply = client_.query(render(record, response), [](std::string_view r) {
    return parse_verdict(r).has_value();
  });
  return *parse_verdict(reply);
}

FormatValidator::FormatValidator(LlmClient* judge_client,
                                 const AssetStore* assets) {
  if (judge_client != nullptr && assets != nullptr) {
    judge_.emplace(*judge_client, *assets);
  }
}

bool FormatValidator::accept(const QuestionRecord& record,
                             const std::string& response) {
  if (record.format == AnswerFormat::kMcq) return exact_.accept(record, response);
  if (!judge_) {
    throw std::logic_error("validating QA or list answers needs a judge");
  }
  return judge_->accept(record, response);
}

RejectionResult rejection_validate(const QuestionRecord& record,
                                   std::string candidate,
                                   ResponseValidator& validator, int budget,
                                   const Regenerate& regenerate) {
  if (budget < 1) throw std::invalid_argument("rejection budget must be >= 1");
  RejectionResult out;
  for (int attempt = 1; attempt <= budget; ++attempt) {
    if (attempt > 1) candidate = regenerate(attempt);
    out.attempts_used = attempt;
    if (validator.accept(record, candidate)) {
      out.accepted = true;
      out.response = std::move(candidate);
      return out;
    }
  }
  return out;
}

}  // namespace listreward
