#include "listreward/reward.h"

#include <algorithm>
#include <cctype>

#include "listreward/text.h"

namespace listreward {

std::string_view to_string(RewardKind kind) {
  switch (kind) {
    case RewardKind::kMcq: return "mcq";
    case RewardKind::kQa: return "qa";
    case RewardKind::kListAcc: return "list-acc";
    case RewardKind::kListMrr: return "list-mrr";
    case RewardKind::kListJudgeMrr: return "list-judge-mrr";
  }
  return "unknown";
}

std::optional<RewardKind> parse_reward_kind(std::string_view name) {
  for (RewardKind k : {RewardKind::kMcq, RewardKind::kQa, RewardKind::kListAcc,
                       RewardKind::kListMrr, RewardKind::kListJudgeMrr}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

RewardKind default_reward_kind(AnswerFormat format) {
  switch (format) {
    case AnswerFormat::kMcq: return RewardKind::kMcq;
    case AnswerFormat::kQa: return RewardKind::kQa;
    case AnswerFormat::kList: return RewardKind::kListMrr;
  }
  return RewardKind::kQa;
}

void validate_config(const RewardConfig& config) {
  if (config.lambda) {
    if (config.kind != RewardKind::kListAcc &&
        config.kind != RewardKind::kListMrr) {
      throw ConfigError("length penalty applies to list-acc and list-mrr only");
    }
    if (!(*config.lambda >= 0.0 && *config.lambda <= 1.0)) {
      throw ConfigError("lambda must lie in [0, 1]");
    }
  }
  if (config.kind == RewardKind::kListJudgeMrr) {
    if (!config.judge || config.judge->client == nullptr ||
        config.judge->assets == nullptr) {
      throw ConfigError("list-judge-mrr needs a judge binding");
    }
    if (config.judge->protocol == JudgeProtocol::kQaAcc) {
      throw ConfigError("list-judge-mrr needs an MRR judge protocol");
    }
  }
}

void check_compatible(RewardKind kind, AnswerFormat format) {
  bool ok = kind == RewardKind::kMcq ? format == AnswerFormat::kMcq
                                     : format != AnswerFormat::kMcq;
  if (!ok) {
    throw IncompatibleFormat("reward " + std::string(to_string(kind)) +
                             " cannot score " + std::string(to_string(format)) +
                             " records");
  }
}

int reward_mcq(std::optional<char> predicted, char gold) {
  if (!predicted) return 0;
  auto up = [](char c) {
    return static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  };
  return up(*predicted) == up(gold) ? 1 : 0;
}

namespace {

bool contains_normalized(std::string_view predicted,
                         const std::string& normalized_gold) {
  return normalize(predicted).find(normalized_gold) != std::string::npos;
}

}  // namespace

int reward_qa(std::string_view predicted, std::string_view gold) {
  return contains_normalized(predicted, normalize(gold)) ? 1 : 0;
}

int reward_list(const std::vector<std::string>& items, std::string_view gold) {
  return reward_mrr(items, gold).rank ? 1 : 0;
}

RankedScore reward_mrr(const std::vector<std::string>& items,
                       std::string_view gold) {
  const std::string g = normalize(gold);
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (contains_normalized(items[i], g)) {
      int r = static_cast<int>(i) + 1;
      return {1.0 / r, r};
    }
  }
  return {};
}

double length_penalty(int list_length, double lambda) {
  int l = std::max(list_length, 1);
  return std::max(0.0, 1.0 - lambda * static_cast<double>(l - 1));
}

int reward_format(const ThinkStructure& structure) {
  return structure.well_formed ? 1 : 0;
}

double compose(double correctness, std::optional<double> penalty,
               std::optional<double> format) {
  double effective = correctness * penalty.value_or(1.0);
  if (!format) return effective;
  return (effective + *format) / 2.0;
}

RewardOutcome score_response(const RawResponse& raw,
                             const QuestionRecord& record,
                             const RewardConfig& config) {
  check_compatible(config.kind, record.format);
  const ThinkStructure structure = extract_think_structure(raw.text);
  const std::string_view region = answer_region(raw.text);

  RewardOutcome out;
  switch (config.kind) {
    case RewardKind::kMcq: {
      auto choice = extract_choice(region, record.option_labels());
      out.correctness = reward_mcq(choice, record.gold.empty() ? '\0' : record.gold[0]);
      break;
    }
    case RewardKind::kQa: {
      auto boxed = extract_boxed(region);
      out.correctness = boxed ? reward_qa(*boxed, record.gold)
                              : reward_qa(region, record.gold);
      break;
    }
    case RewardKind::kListAcc:
    case RewardKind::kListMrr: {
      auto items = parse_ranked_list(region, config.grammar);
      RankedScore s = reward_mrr(items, record.gold);
      out.rank = s.rank;
      out.list_length = static_cast<int>(items.size());
      out.correctness = config.kind == RewardKind::kListMrr
                            ? s.value
                            : (s.rank ? 1.0 : 0.0);
      if (config.lambda) {
        out.penalty = length_penalty(*out.list_length, *config.lambda);
      }
      break;
    }
    case RewardKind::kListJudgeMrr: {
      if (!config.judge || config.judge->client == nullptr ||
          config.judge->assets == nullptr) {
        throw ConfigError("list-judge-mrr needs a judge binding");
      }
      auto items = parse_ranked_list(region, config.grammar);
      out.list_length = static_cast<int>(items.size());
      if (!items.empty()) {
        JudgeRequest req{record.question, record.gold, items,
                         config.judge->protocol};
        JudgeVerdict v =
            run_judge(req, *config.judge->client, *config.judge->assets);
        if (v.rank) {
          out.rank = v.rank;
          out.correctness = 1.0 / *v.rank;
        }
      }
      break;
    }
  }
  if (config.use_format_reward) out.format = reward_format(structure);
  out.total = compose(out.correctness, out.penalty, out.format);
  return out;
}

}  // namespace listreward
