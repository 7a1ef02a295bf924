#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "listreward/metric.h"
#include "listreward/records.h"
#include "listreward/responses.h"
#include "support.h"

using namespace listreward;

namespace {

EvalRecord qa_rec(double correct) {
  EvalRecord e;
  e.format = AnswerFormat::kQa;
  e.outcome.correctness = correct;
  e.outcome.total = correct;
  return e;
}

EvalRecord list_rec(std::vector<std::string> items, const std::string& gold) {
  EvalRecord e;
  e.format = AnswerFormat::kList;
  auto s = reward_mrr(items, gold);
  e.outcome.correctness = s.value;
  e.outcome.total = s.value;
  e.outcome.rank = s.rank;
  e.outcome.list_length = static_cast<int>(items.size());
  e.list_items = std::move(items);
  return e;
}

EvalRecord list_with(int size, std::optional<int> rank) {
  std::vector<std::string> items;
  for (int i = 1; i <= size; ++i) items.push_back(rank == i ? "gold" : "x" + std::to_string(i));
  return list_rec(items, "gold");
}

}  // namespace

TEST(Accuracy, Examples) {
  std::vector<EvalRecord> r = {qa_rec(1), qa_rec(0), qa_rec(1)};
  EXPECT_DOUBLE_EQ(accuracy(r), 2.0 / 3.0);
  std::vector<EvalRecord> z = {qa_rec(0), qa_rec(0)};
  EXPECT_EQ(accuracy(z), 0.0);
  EXPECT_THROW(accuracy(std::vector<EvalRecord>{}), EmptySet);
}

TEST(Accuracy, ListCountsAnyCorrectItem) {
  std::vector<EvalRecord> r = {list_with(3, 3), list_with(2, std::nullopt)};
  EXPECT_DOUBLE_EQ(accuracy(r), 0.5);
}

TEST(Mrr, Examples) {
  std::vector<EvalRecord> r = {list_with(2, 1), list_with(2, 2), list_with(2, std::nullopt)};
  EXPECT_DOUBLE_EQ(mrr(r), 0.5);
  std::vector<EvalRecord> ones = {list_with(1, 1), list_with(4, 1)};
  EXPECT_DOUBLE_EQ(mrr(ones), 1.0);
  std::vector<EvalRecord> qa = {qa_rec(1)};
  EXPECT_THROW(mrr(qa), IncompatibleFormat);
}

TEST(Mrr, RecomputedFromItems) {
  std::mt19937 rng(1);
  std::uniform_int_distribution<int> size(0, 6), pos(0, 7);
  for (int t = 0; t < 200; ++t) {
    std::vector<EvalRecord> set;
    double sum = 0.0;
    for (int i = 0; i < 25; ++i) {
      int n = size(rng);
      int p = pos(rng);
      std::optional<int> rank = (p >= 1 && p <= n) ? std::optional<int>(p) : std::nullopt;
      set.push_back(list_with(n, rank));
      auto again = reward_mrr(*set.back().list_items, "gold");
      sum += again.value;
    }
    EXPECT_DOUBLE_EQ(mrr(set), sum / 25.0);
  }
}

TEST(ListStats, Examples) {
  std::vector<EvalRecord> r = {list_with(0, std::nullopt), list_with(2, 1), list_with(4, 3)};
  auto s = list_stats(r);
  EXPECT_DOUBLE_EQ(s.ll, 2.0);
  EXPECT_EQ(s.vll, 3.0);
  EXPECT_EQ(s.cp, 2.0);

  std::vector<EvalRecord> empty = {list_with(0, std::nullopt), list_with(0, std::nullopt)};
  s = list_stats(empty);
  EXPECT_EQ(s.ll, 0.0);
  EXPECT_FALSE(s.vll);
  EXPECT_FALSE(s.cp);
}

TEST(ListStats, DuplicatesCounted) {
  // Degenerate repeated-item lists count every copy.
  std::vector<EvalRecord> r = {list_rec({"a", "a", "a", "gold", "gold"}, "gold"),
                               list_rec({"b", "b"}, "gold")};
  auto s = list_stats(r);
  EXPECT_DOUBLE_EQ(s.ll, 3.5);
  EXPECT_EQ(s.item_total, 7u);
  EXPECT_EQ(s.cp, 4.0);
}

TEST(AttachJudge, AllPresentAndAllAbsent) {
  std::vector<EvalRecord> r = {list_with(2, std::nullopt), list_with(3, std::nullopt)};
  std::vector<JudgeVerdict> v(2);
  v[0].rank = 1;
  v[1].rank = 2;
  attach_judge(r, v);
  auto rep = build_report(r, true);
  EXPECT_EQ(rep.acc_llm, 1.0);
  EXPECT_EQ(rep.mrr_llm, 0.75);

  std::vector<EvalRecord> r2 = {list_with(2, 1), list_with(3, 2)};
  std::vector<JudgeVerdict> none(2);
  attach_judge(r2, none);
  rep = build_report(r2, true);
  EXPECT_EQ(rep.acc_llm, 0.0);
  EXPECT_EQ(rep.mrr_llm, 0.0);

  EXPECT_THROW(attach_judge(r2, std::vector<JudgeVerdict>(1)), CardinalityMismatch);
}

TEST(AttachJudge, QaEquivalenceIsRankOne) {
  std::vector<EvalRecord> r = {qa_rec(0), qa_rec(1)};
  std::vector<JudgeVerdict> v(2);
  v[0].equivalent = true;
  v[0].rank = 1;
  attach_judge(r, v);
  auto rep = build_report(r, true);
  EXPECT_EQ(rep.acc_llm, 0.5);
  EXPECT_FALSE(rep.mrr_llm);
  EXPECT_FALSE(rep.mrr);
}

TEST(Report, ResponseLengthOnlyWhenAllTokensKnown) {
  std::vector<EvalRecord> r = {list_with(1, 1), list_with(1, 1)};
  r[0].response_tokens = 100;
  EXPECT_FALSE(build_report(r, false).resp_len_mean);
  r[1].response_tokens = 300;
  auto rep = build_report(r, false);
  EXPECT_EQ(rep.resp_len_mean, 200.0);
  EXPECT_EQ(rep.resp_len_std, 100.0);
}

TEST(Aggregate, MacroNotMicro) {
  MetricReport a, b;
  a.acc = 0.2;
  a.n = 100;
  b.acc = 0.4;
  b.n = 10;
  auto agg = aggregate({{"a", a}, {"b", b}});
  EXPECT_NEAR(agg.acc, 0.3, 1e-15);
  EXPECT_EQ(agg.n, 110u);
}

TEST(Aggregate, SingleIsIdentity) {
  std::vector<EvalRecord> r = {list_with(2, 1), list_with(3, std::nullopt)};
  auto rep = build_report(r, false);
  EXPECT_EQ(aggregate({{"only", rep}}), rep);
  EXPECT_EQ(aggregate({{"x", rep}, {"y", rep}, {"z", rep}}).acc, rep.acc);
}

TEST(Aggregate, FourBenchmarkRowMean) {
  // Per-benchmark table rows, averaged by hand.
  const double acc[] = {0.50, 0.25, 0.75, 0.40};
  const double mrr_v[] = {0.40, 0.20, 0.60, 0.30};
  const double vll[] = {3.0, 4.0, 2.0, 5.0};
  std::map<std::string, MetricReport> m;
  for (int i = 0; i < 4; ++i) {
    MetricReport r;
    r.format = AnswerFormat::kList;
    r.n = 10 * (i + 1);
    r.acc = acc[i];
    r.mrr = mrr_v[i];
    r.vll = vll[i];
    r.ll = vll[i];
    m.emplace("b" + std::to_string(i), r);
  }
  auto agg = aggregate(m);
  EXPECT_NEAR(agg.acc, 0.475, 1e-15);
  EXPECT_NEAR(*agg.mrr, 0.375, 1e-15);
  EXPECT_NEAR(*agg.vll, 3.5, 1e-15);
  EXPECT_FALSE(agg.cp);
}

TEST(Aggregate, MixedFormatsRejected) {
  MetricReport a, b;
  a.format = AnswerFormat::kQa;
  b.format = AnswerFormat::kList;
  EXPECT_THROW(aggregate({{"a", a}, {"b", b}}), IncompatibleFormat);
  EXPECT_THROW(aggregate({}), EmptySet);
}

TEST(MultiValid, Examples) {
  auto r = list_rec({"ibuprofen", "x"}, "aspirin");
  auto o = multi_valid_reclassify(r, {"aspirin", "ibuprofen"});
  EXPECT_EQ(o.category, MultiValidCategory::kIncorrectToValid);
  EXPECT_EQ(o.coverage, Coverage::kPartial);

  r = list_rec({"aspirin", "Ibuprofen."}, "aspirin");
  o = multi_valid_reclassify(r, {"aspirin", "ibuprofen"});
  EXPECT_EQ(o.category, MultiValidCategory::kCorrectKept);
  EXPECT_EQ(o.coverage, Coverage::kAllValidCovered);

  r = list_rec({"x"}, "aspirin");
  o = multi_valid_reclassify(r, {"aspirin", "ibuprofen"});
  EXPECT_EQ(o.category, MultiValidCategory::kStillIncorrect);
  EXPECT_FALSE(o.coverage);
}

TEST(MultiValid, ExactNotSubstring) {
  auto r = list_rec({"low dose ibuprofen"}, "aspirin");
  auto o = multi_valid_reclassify(r, {"aspirin", "ibuprofen"});
  EXPECT_EQ(o.category, MultiValidCategory::kStillIncorrect);
}

TEST(MultiValid, NeverDowngrades) {
  auto r = list_rec({"aspirin"}, "aspirin");
  // Even when nothing in the list equals a valid answer exactly.
  r.list_items = std::vector<std::string>{"zzz"};
  auto o = multi_valid_reclassify(r, {"aspirin", "ibuprofen"});
  EXPECT_EQ(o.category, MultiValidCategory::kCorrectKept);
  ASSERT_TRUE(o.coverage);
}

TEST(MultiValid, GoldOnlyCannotFlip) {
  std::mt19937 rng(2);
  std::uniform_int_distribution<int> size(0, 5), pos(0, 6);
  for (int i = 0; i < 500; ++i) {
    int n = size(rng), p = pos(rng);
    auto r = list_with(n, (p >= 1 && p <= n) ? std::optional<int>(p) : std::nullopt);
    auto o = multi_valid_reclassify(r, {"gold"});
    EXPECT_NE(o.category, MultiValidCategory::kIncorrectToValid);
  }
}

TEST(MultiValid, AllEmptyListsNeverFlip) {
  MultiValidTally t;
  for (int i = 0; i < 10; ++i) {
    t.add(multi_valid_reclassify(list_with(0, std::nullopt), {"gold", "other"}), 2);
  }
  EXPECT_EQ(t.incorrect_to_valid, 0u);
  EXPECT_EQ(t.still_incorrect, 10u);
}

TEST(GoldenFixture, HandCountedMetrics) {
  auto records = load_records(testing_support::data_dir() / "golden" / "dataset.jsonl");
  auto responses = load_responses(testing_support::data_dir() / "golden" / "responses.jsonl");
  std::map<std::string, const QuestionRecord*> by_id;
  for (const auto& r : records) by_id[r.record_id] = &r;
  std::map<AnswerFormat, std::vector<EvalRecord>> groups;
  for (const auto& resp : responses) {
    const QuestionRecord& rec = *by_id.at(resp.record_id);
    RewardConfig c;
    c.kind = default_reward_kind(rec.format);
    EvalRecord e;
    e.format = rec.format;
    e.outcome = score_response({resp.text, resp.tokens}, rec, c);
    e.response_tokens = resp.tokens;
    if (rec.format == AnswerFormat::kList) e.list_items = parse_ranked_list(answer_region(resp.text));
    groups[rec.format].push_back(e);
  }
  // 3 of 4 choices right; 2 of 4 short answers; lists ranked {1, 3, -, -}
  // with sizes {2, 3, 2, 0} and 100..400 tokens.
  EXPECT_DOUBLE_EQ(accuracy(groups[AnswerFormat::kMcq]), 0.75);
  EXPECT_DOUBLE_EQ(accuracy(groups[AnswerFormat::kQa]), 0.5);
  auto rep = build_report(groups[AnswerFormat::kList], false);
  EXPECT_DOUBLE_EQ(rep.acc, 0.5);
  EXPECT_DOUBLE_EQ(*rep.mrr, (1.0 + 1.0 / 3.0) / 4.0);
  EXPECT_DOUBLE_EQ(*rep.cp, 2.0);
  EXPECT_DOUBLE_EQ(*rep.ll, 1.75);
  EXPECT_DOUBLE_EQ(*rep.vll, 7.0 / 3.0);
  EXPECT_DOUBLE_EQ(*rep.resp_len_mean, 250.0);
  EXPECT_NEAR(*rep.resp_len_std, std::sqrt(12500.0), 1e-9);
}
