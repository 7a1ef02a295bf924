#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "listreward/assets.h"
#include "listreward/llm_client.h"

namespace listreward {

enum class JudgeProtocol { kFullMrr, kSimpleMrr, kQaAcc };

std::string_view to_string(JudgeProtocol protocol);
// Asset name of the protocol's prompt, e.g. "judge/full_mrr".
std::string judge_template_name(JudgeProtocol protocol);

struct JudgeRequest {
  std::string question;
  std::string gold;
  std::vector<std::string> items;
  JudgeProtocol protocol = JudgeProtocol::kFullMrr;
};

struct JudgeVerdict {
  // 1-based position of the first item the judge deems equivalent to gold.
  std::optional<int> rank;
  bool equivalent = false;
  std::string raw_reply;
  bool parse_ok = false;
};

// Machine-readable reply lines demanded by the shipped judge templates.
inline constexpr std::string_view kRankMarker = "RANK:";
inline constexpr std::string_view kEquivalentMarker = "EQUIVALENT:";

// Numbered item block, "1. first\n2. second".
std::string format_items(const std::vector<std::string>& items);

// Throws TemplateMissing, or std::invalid_argument for an MRR request with no
// items.
std::string render_judge_prompt(const JudgeRequest& request,
                                const AssetStore& assets);

// Reads the last "RANK: <k|none>" line. A rank outside [1, n_items] or any
// other value gives parse_ok = false.
JudgeVerdict parse_judge_reply(std::string_view text, int n_items);

// Reads the last "EQUIVALENT: <yes|no>" line (QA_ACC protocol).
JudgeVerdict parse_equivalence_reply(std::string_view text);

// Renders, queries, and parses. Garbled replies are retried like transport
// failures; throws JudgeUnavailable when the client gives up.
JudgeVerdict run_judge(const JudgeRequest& request, LlmClient& client,
                       const AssetStore& assets);

// 1/rank, or 0 when the judge finds no equivalent item. MRR protocols only.
double judge_mrr(const JudgeRequest& request, LlmClient& client,
                 const AssetStore& assets);

// Rank-agnostic credit: 1 iff the verdict names any rank.
int derived_llm_acc(const JudgeVerdict& verdict);

}  // namespace listreward
