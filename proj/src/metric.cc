#include "listreward/metric.h"

#include <cmath>
#include <set>

#include "listreward/text.h"

namespace listreward {
namespace {

void require_nonempty(std::span<const EvalRecord> records, const char* what) {
  if (records.empty()) {
    throw EmptySet(std::string(what) + " of an empty record set");
  }
}

void require_lists(std::span<const EvalRecord> records, const char* what) {
  for (const auto& r : records) {
    if (r.format != AnswerFormat::kList) {
      throw IncompatibleFormat(std::string(what) + " needs list records; '" +
                               r.record_id + "' is " +
                               std::string(to_string(r.format)));
    }
  }
}

std::optional<int> rank_of(const EvalRecord& r, RankSource source) {
  return source == RankSource::kJudge ? r.judge_rank : r.outcome.rank;
}

std::optional<double> mean_of_present(
    const std::map<std::string, MetricReport>& reports,
    std::optional<double> MetricReport::*field) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& [name, report] : reports) {
    if (const auto& v = report.*field) {
      sum += *v;
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

}  // namespace

double accuracy(std::span<const EvalRecord> records, RankSource source) {
  require_nonempty(records, "accuracy");
  std::size_t hits = 0;
  for (const auto& r : records) {
    bool correct = source == RankSource::kJudge ? r.judge_rank.has_value()
                                                : r.outcome.correctness > 0.0;
    if (correct) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(records.size());
}

double mrr(std::span<const EvalRecord> records, RankSource source) {
  require_nonempty(records, "mrr");
  require_lists(records, "mrr");
  double sum = 0.0;
  for (const auto& r : records) {
    if (auto rank = rank_of(r, source)) sum += 1.0 / *rank;
  }
  return sum / static_cast<double>(records.size());
}

ListStats list_stats(std::span<const EvalRecord> records) {
  require_nonempty(records, "list statistics");
  require_lists(records, "list statistics");
  ListStats s;
  std::size_t rank_sum = 0, ranked = 0;
  for (const auto& r : records) {
    if (!r.list_items) {
      throw std::invalid_argument("list record '" + r.record_id +
                                  "' carries no list items");
    }
    std::size_t len = r.list_items->size();
    s.item_total += len;
    if (len > 0) ++s.nonempty;
    if (r.outcome.rank) {
      rank_sum += static_cast<std::size_t>(*r.outcome.rank);
      ++ranked;
    }
  }
  s.ll = static_cast<double>(s.item_total) / static_cast<double>(records.size());
  if (s.nonempty > 0) {
    s.vll = static_cast<double>(s.item_total) / static_cast<double>(s.nonempty);
  }
  if (ranked > 0) {
    s.cp = static_cast<double>(rank_sum) / static_cast<double>(ranked);
  }
  return s;
}

void attach_judge(std::span<EvalRecord> records,
                  std::span<const JudgeVerdict> verdicts) {
  std::size_t judged = 0;
  for (const auto& r : records) {
    if (r.format != AnswerFormat::kMcq) ++judged;
  }
  if (judged != verdicts.size()) {
    throw CardinalityMismatch(std::to_string(verdicts.size()) +
                              " verdicts for " + std::to_string(judged) +
                              " judged records");
  }
  std::size_t v = 0;
  for (auto& r : records) {
    if (r.format == AnswerFormat::kMcq) continue;
    const JudgeVerdict& verdict = verdicts[v++];
    if (r.format == AnswerFormat::kQa) {
      r.judge_rank = verdict.equivalent || verdict.rank
                         ? std::optional<int>(1)
                         : std::nullopt;
    } else {
      r.judge_rank = verdict.rank;
    }
  }
}

MetricReport build_report(std::span<const EvalRecord> records, bool judged) {
  require_nonempty(records, "report");
  MetricReport rep;
  rep.format = records.front().format;
  for (const auto& r : records) {
    if (r.format != rep.format) {
      throw IncompatibleFormat("report over mixed answer formats");
    }
  }
  rep.n = records.size();
  rep.acc = accuracy(records);
  if (rep.format == AnswerFormat::kList) {
    rep.mrr = mrr(records);
    ListStats s = list_stats(records);
    rep.cp = s.cp;
    rep.ll = s.ll;
    rep.vll = s.vll;
  }
  if (judged && rep.format != AnswerFormat::kMcq) {
    rep.acc_llm = accuracy(records, RankSource::kJudge);
    if (rep.format == AnswerFormat::kList) {
      rep.mrr_llm = mrr(records, RankSource::kJudge);
    }
  }
  bool all_tokens = true;
  for (const auto& r : records) all_tokens = all_tokens && r.response_tokens;
  if (all_tokens) {
    double sum = 0.0;
    for (const auto& r : records) sum += static_cast<double>(*r.response_tokens);
    double mean = sum / static_cast<double>(records.size());
    double sq = 0.0;
    for (const auto& r : records) {
      double d = static_cast<double>(*r.response_tokens) - mean;
      sq += d * d;
    }
    rep.resp_len_mean = mean;
    rep.resp_len_std = std::sqrt(sq / static_cast<double>(records.size()));
  }
  return rep;
}

MetricReport aggregate(const std::map<std::string, MetricReport>& reports) {
  if (reports.empty()) throw EmptySet("aggregate of no benchmark reports");
  MetricReport out;
  out.format = reports.begin()->second.format;
  double acc = 0.0;
  for (const auto& [name, r] : reports) {
    if (r.format != out.format) {
      throw IncompatibleFormat("aggregate over mixed answer formats");
    }
    out.n += r.n;
    acc += r.acc;
  }
  out.acc = acc / static_cast<double>(reports.size());
  out.mrr = mean_of_present(reports, &MetricReport::mrr);
  out.acc_llm = mean_of_present(reports, &MetricReport::acc_llm);
  out.mrr_llm = mean_of_present(reports, &MetricReport::mrr_llm);
  out.cp = mean_of_present(reports, &MetricReport::cp);
  out.ll = mean_of_present(reports, &MetricReport::ll);
  out.vll = mean_of_present(reports, &MetricReport::vll);
  out.resp_len_mean = mean_of_present(reports, &MetricReport::resp_len_mean);
  out.resp_len_std = mean_of_present(reports, &MetricReport::resp_len_std);
  return out;
}

std::string_view to_string(MultiValidCategory category) {
  switch (category) {
    case MultiValidCategory::kCorrectKept: return "CORRECT_KEPT";
    case MultiValidCategory::kIncorrectToValid: return "INCORRECT_TO_VALID";
    case MultiValidCategory::kStillIncorrect: return "STILL_INCORRECT";
  }
  return "UNKNOWN";
}

std::string_view to_string(Coverage coverage) {
  switch (coverage) {
    case Coverage::kAllValidCovered: return "ALL_VALID_COVERED";
    case Coverage::kPartial: return "PARTIAL";
  }
  return "UNKNOWN";
}

MultiValidOutcome multi_valid_reclassify(
    const EvalRecord& record, const std::vector<std::string>& valid_answers) {
  if (record.format != AnswerFormat::kList) {
    throw IncompatibleFormat("multi-valid re-evaluation needs list records");
  }
  if (valid_answers.empty()) {
    throw std::invalid_argument("valid answer set of '" + record.record_id +
                                "' is empty");
  }
  std::set<std::string> items;
  if (record.list_items) {
    for (const auto& item : *record.list_items) items.insert(normalize(item));
  }
  std::size_t hit = 0;
  for (const auto& v : valid_answers) {
    if (items.count(normalize(v)) > 0) ++hit;
  }

  MultiValidOutcome out;
  if (record.outcome.correctness > 0.0) {
    out.category = MultiValidCategory::kCorrectKept;
  } else if (hit > 0) {
    out.category = MultiValidCategory::kIncorrectToValid;
  } else {
    out.category = MultiValidCategory::kStillIncorrect;
    return out;
  }
  out.coverage = hit == valid_answers.size() ? Coverage::kAllValidCovered
                                             : Coverage::kPartial;
  return out;
}

void MultiValidTally::add(const MultiValidOutcome& outcome,
                          std::size_t n_valid) {
  ++total;
  switch (outcome.category) {
    case MultiValidCategory::kCorrectKept: ++correct_kept; break;
    case MultiValidCategory::kIncorrectToValid: ++incorrect_to_valid; break;
    case MultiValidCategory::kStillIncorrect: ++still_incorrect; break;
  }
  if (!outcome.coverage) return;
  bool all = *outcome.coverage == Coverage::kAllValidCovered;
  if (all) {
    ++all_valid_covered;
  } else {
    ++partial;
  }
  if (outcome.category == MultiValidCategory::kCorrectKept) {
    if (all) {
      ++correct_all_valid_covered;
      if (n_valid > 1) ++correct_all_valid_covered_multi;
    } else {
      ++correct_partial;
    }
  }
}

}  // namespace listreward
