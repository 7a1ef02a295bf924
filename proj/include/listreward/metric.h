#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "listreward/judge.h"
#include "listreward/reward.h"
#include "listreward/types.h"

namespace listreward {

class EmptySet : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class CardinalityMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct EvalRecord {
  std::string record_id;
  std::string benchmark;
  AnswerFormat format = AnswerFormat::kQa;
  // Exact-match scoring of the response.
  RewardOutcome outcome;
  std::optional<int> judge_rank;
  std::optional<std::int64_t> response_tokens;
  std::optional<std::vector<std::string>> list_items;
};

// Which correctness signal a metric reads.
enum class RankSource { kExactMatch, kJudge };

// All metrics require a non-empty input and throw EmptySet otherwise.
double accuracy(std::span<const EvalRecord> records,
                RankSource source = RankSource::kExactMatch);
double mrr(std::span<const EvalRecord> records,
           RankSource source = RankSource::kExactMatch);

struct ListStats {
  std::optional<double> cp;
  double ll = 0.0;
  std::optional<double> vll;
  std::size_t nonempty = 0;
  // Items over all lists; ll = item_total / n and vll = item_total / nonempty.
  std::size_t item_total = 0;
};

// cp over records with a correct item, ll over all lists, vll over non-empty
// lists.
ListStats list_stats(std::span<const EvalRecord> records);

// Copies verdict ranks into judge_rank. A QA verdict counts as rank 1 when
// equivalent. Throws CardinalityMismatch.
void attach_judge(std::span<EvalRecord> records,
                  std::span<const JudgeVerdict> verdicts);

struct MetricReport {
  AnswerFormat format = AnswerFormat::kQa;
  std::size_t n = 0;
  double acc = 0.0;
  std::optional<double> mrr;  // lists only
  std::optional<double> acc_llm;
  std::optional<double> mrr_llm;
  std::optional<double> cp;
  std::optional<double> ll;  // lists only
  std::optional<double> vll;
  std::optional<double> resp_len_mean;
  std::optional<double> resp_len_std;

  bool operator==(const MetricReport&) const = default;
};

// Report for records of one format. Judge columns are filled when `judged`.
MetricReport build_report(std::span<const EvalRecord> records, bool judged);

// Unweighted mean over benchmarks of each metric; optional metrics average
// over the benchmarks that report them. n is summed.
MetricReport aggregate(const std::map<std::string, MetricReport>& reports);

enum class MultiValidCategory { kCorrectKept, kIncorrectToValid, kStillIncorrect };
enum class Coverage { kAllValidCovered, kPartial };

std::string_view to_string(MultiValidCategory category);
std::string_view to_string(Coverage coverage);

struct MultiValidOutcome {
  MultiValidCategory category = MultiValidCategory::kStillIncorrect;
  std::optional<Coverage> coverage;
};

// An item hits a valid answer iff their normalized forms are equal.
// Original correctness comes from record.outcome.
MultiValidOutcome multi_valid_reclassify(
    const EvalRecord& record, const std::vector<std::string>& valid_answers);

struct MultiValidTally {
  std::size_t total = 0;
  std::size_t correct_kept = 0;
  std::size_t incorrect_to_valid = 0;
  std::size_t still_incorrect = 0;
  std::size_t all_valid_covered = 0;
  std::size_t partial = 0;
  // Coverage split for the originally correct records.
  std::size_t correct_all_valid_covered = 0;
  std::size_t correct_all_valid_covered_multi = 0;  // with >1 valid answer
  std::size_t correct_partial = 0;

  void add(const MultiValidOutcome& outcome, std::size_t n_valid);
};

}  // namespace listreward
