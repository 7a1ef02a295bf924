#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "listreward/assets.h"
#include "listreward/judge.h"
#include "listreward/llm_client.h"
#include "listreward/parse.h"
#include "listreward/records.h"

namespace listreward {

enum class RewardKind { kMcq, kQa, kListAcc, kListMrr, kListJudgeMrr };

std::string_view to_string(RewardKind kind);  // "mcq", "list-mrr", ...
std::optional<RewardKind> parse_reward_kind(std::string_view name);
// Reward used when none is requested: mcq, qa, or list-mrr.
RewardKind default_reward_kind(AnswerFormat format);

struct JudgeBinding {
  LlmClient* client = nullptr;
  const AssetStore* assets = nullptr;
  JudgeProtocol protocol = JudgeProtocol::kFullMrr;
};

struct RewardConfig {
  RewardKind kind = RewardKind::kMcq;
  bool use_format_reward = false;
  // Length-penalty coefficient; list-acc and list-mrr only.
  std::optional<double> lambda;
  std::optional<JudgeBinding> judge;
  ListGrammar grammar;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Throws ConfigError.
void validate_config(const RewardConfig& config);

struct RewardOutcome {
  // Raw correctness reward before any length penalty.
  double correctness = 0.0;
  std::optional<double> format;
  double total = 0.0;
  // First matching list position, 1-based.
  std::optional<int> rank;
  std::optional<int> list_length;
  std::optional<double> penalty;

  bool operator==(const RewardOutcome&) const = default;
};

struct RankedScore {
  double value = 0.0;
  std::optional<int> rank;
};

int reward_mcq(std::optional<char> predicted, char gold);
// Directional: normalize(gold) must occur inside normalize(predicted).
int reward_qa(std::string_view predicted, std::string_view gold);
int reward_list(const std::vector<std::string>& items, std::string_view gold);
RankedScore reward_mrr(const std::vector<std::string>& items,
                       std::string_view gold);
// max(0, 1 - lambda * (L - 1)); L = 0 is treated as L = 1.
double length_penalty(int list_length, double lambda);
int reward_format(const ThinkStructure& structure);
// Correctness is scaled by the penalty first, then averaged with the format
// reward when one is present.
double compose(double correctness, std::optional<double> penalty,
               std::optional<double> format);

// Full pipeline for one response. Total for every non-judge kind; throws
// IncompatibleFormat for a record the kind cannot score and JudgeUnavailable
// from the judge.
RewardOutcome score_response(const RawResponse& raw,
                             const QuestionRecord& record,
                             const RewardConfig& config);

// Throws IncompatibleFormat unless `kind` can score records of `format`.
void check_compatible(RewardKind kind, AnswerFormat format);

}  // namespace listreward
