#include <gtest/gtest.h>

#include <thread>

#include "json.hpp"
#include "listreward/judge.h"
#include "listreward/reward.h"
#include "listreward/util.h"
#include "support.h"

using namespace listreward;
using testing_support::FnTransport;
using testing_support::make_client;

namespace {

JudgeRequest two_items(JudgeProtocol p = JudgeProtocol::kFullMrr) {
  return JudgeRequest{"Which drug?", "aspirin", {"ibuprofen", "aspirin"}, p};
}

}  // namespace

TEST(JudgePrompt, NumberedItems) {
  auto assets = testing_support::shipped_assets();
  std::string p = render_judge_prompt(two_items(), assets);
  EXPECT_NE(p.find("\n1. ibuprofen\n"), std::string::npos);
  EXPECT_NE(p.find("\n2. aspirin\n"), std::string::npos);
  EXPECT_NE(p.find("aspirin"), std::string::npos);
  EXPECT_EQ(p.find("{{"), std::string::npos);
}

TEST(JudgePrompt, Deterministic) {
  auto assets = testing_support::shipped_assets();
  EXPECT_EQ(render_judge_prompt(two_items(), assets),
            render_judge_prompt(two_items(), assets));
}

TEST(JudgePrompt, FullAndSimpleShareItemBlock) {
  auto assets = testing_support::shipped_assets();
  std::string full = render_judge_prompt(two_items(JudgeProtocol::kFullMrr), assets);
  std::string simple = render_judge_prompt(two_items(JudgeProtocol::kSimpleMrr), assets);
  EXPECT_NE(full, simple);
  std::string block = format_items(two_items().items);
  EXPECT_EQ(block, "1. ibuprofen\n2. aspirin");
  EXPECT_NE(full.find(block), std::string::npos);
  EXPECT_NE(simple.find(block), std::string::npos);
  EXPECT_GT(full.size(), simple.size());
}

TEST(JudgePrompt, EmptyMrrItemsRejected) {
  auto assets = testing_support::shipped_assets();
  JudgeRequest r{"q", "g", {}, JudgeProtocol::kFullMrr};
  EXPECT_THROW(render_judge_prompt(r, assets), std::invalid_argument);
}

TEST(JudgePrompt, MissingTemplate) {
  testing_support::TempDir dir;
  AssetStore empty(dir.path());
  EXPECT_THROW(render_judge_prompt(two_items(), empty), TemplateMissing);
}

TEST(JudgeReply, Examples) {
  auto v = parse_judge_reply("RANK: 2", 3);
  EXPECT_TRUE(v.parse_ok);
  EXPECT_EQ(v.rank, 2);
  v = parse_judge_reply("RANK: none", 3);
  EXPECT_TRUE(v.parse_ok);
  EXPECT_FALSE(v.rank);
  EXPECT_FALSE(parse_judge_reply("RANK: 7", 3).parse_ok);
}

TEST(JudgeReply, LastLineWinsAndDecorationTolerated) {
  EXPECT_EQ(parse_judge_reply("RANK: 1\nthinking more\n**rank: 3**", 3).rank, 3);
  EXPECT_FALSE(parse_judge_reply("RANK: 0", 3).parse_ok);
  EXPECT_FALSE(parse_judge_reply("RANK: two", 3).parse_ok);
  EXPECT_FALSE(parse_judge_reply("", 3).parse_ok);
  EXPECT_FALSE(parse_judge_reply("RANK: -1", 3).parse_ok);
}

TEST(JudgeReply, TotalOnArbitraryText) {
  std::string junk = "RANK:";
  for (int i = 0; i < 300; ++i) {
    junk += static_cast<char>(i % 128);
    auto v = parse_judge_reply(junk, 4);
    if (v.parse_ok && v.rank) {
      EXPECT_GE(*v.rank, 1);
      EXPECT_LE(*v.rank, 4);
    }
  }
}

TEST(EquivalenceReply, YesNo) {
  auto v = parse_equivalence_reply("reasons\nEQUIVALENT: yes");
  EXPECT_TRUE(v.parse_ok);
  EXPECT_TRUE(v.equivalent);
  EXPECT_EQ(v.rank, 1);
  v = parse_equivalence_reply("EQUIVALENT: no");
  EXPECT_TRUE(v.parse_ok);
  EXPECT_FALSE(v.rank);
  EXPECT_FALSE(parse_equivalence_reply("maybe").parse_ok);
}

TEST(JudgeMrr, Examples) {
  auto assets = testing_support::shipped_assets();
  auto client = testing_support::exact_match_judge_client();
  JudgeRequest first{"q", "aspirin", {"aspirin"}, JudgeProtocol::kFullMrr};
  EXPECT_DOUBLE_EQ(judge_mrr(first, *client, assets), 1.0);
  JudgeRequest none{"q", "aspirin", {"x", "y"}, JudgeProtocol::kFullMrr};
  EXPECT_DOUBLE_EQ(judge_mrr(none, *client, assets), 0.0);
}

TEST(JudgeMrr, EqualsRewardMrrUnderMockJudge) {
  auto assets = testing_support::shipped_assets();
  auto client = testing_support::exact_match_judge_client();
  const std::vector<std::vector<std::string>> lists = {
      {"gold"}, {"a", "gold"}, {"a", "b", "c"}, {"Gold.", "x"}, {"x", "y", "z", "gold"}};
  for (auto p : {JudgeProtocol::kFullMrr, JudgeProtocol::kSimpleMrr}) {
    for (const auto& items : lists) {
      JudgeRequest r{"q", "gold", items, p};
      EXPECT_EQ(judge_mrr(r, *client, assets), reward_mrr(items, "gold").value);
    }
  }
}

TEST(DerivedLlmAcc, Examples) {
  JudgeVerdict v;
  v.rank = 3;
  EXPECT_EQ(derived_llm_acc(v), 1);
  v.rank = 1;
  EXPECT_EQ(derived_llm_acc(v), 1);
  v.rank.reset();
  EXPECT_EQ(derived_llm_acc(v), 0);
}

TEST(RunJudge, RetriesGarbledReplies) {
  auto assets = testing_support::shipped_assets();
  std::atomic<int> n{0};
  auto t = std::make_shared<FnTransport>([&](const ChatRequest&) {
    return ++n < 3 ? std::string("I think it is the second") : std::string("RANK: 2");
  });
  auto client = make_client(t, 1, 3);
  auto v = run_judge(two_items(), *client, assets);
  EXPECT_EQ(v.rank, 2);
  EXPECT_EQ(t->calls, 3);
  EXPECT_EQ(client->stats().unusable_replies, 2);
}

TEST(RunJudge, UnparsableAfterRetriesIsUnavailable) {
  auto assets = testing_support::shipped_assets();
  auto t = std::make_shared<FnTransport>([](const ChatRequest&) { return std::string("hmm"); });
  auto client = make_client(t, 1, 2);
  try {
    run_judge(two_items(), *client, assets);
    FAIL();
  } catch (const JudgeUnavailable& e) {
    EXPECT_EQ(e.reason(), JudgeUnavailable::Reason::kUnparsable);
  }
  EXPECT_EQ(t->calls, 3);
}

TEST(LlmClient, TransportFailuresRetriedThenUnavailable) {
  auto t = std::make_shared<FnTransport>([](const ChatRequest&) -> std::string {
    throw TransportError("down");
  });
  auto client = make_client(t, 2, 3);
  try {
    client->query("p", [](std::string_view) { return true; });
    FAIL();
  } catch (const JudgeUnavailable& e) {
    EXPECT_EQ(e.reason(), JudgeUnavailable::Reason::kTransport);
  }
  EXPECT_EQ(t->calls, 4);
  EXPECT_EQ(client->stats().transport_failures, 4);
}

TEST(LlmClient, RequestCarriesConfig) {
  ChatRequest seen;
  std::mutex mu;
  auto t = std::make_shared<FnTransport>([&](const ChatRequest& r) {
    std::lock_guard lock(mu);
    seen = r;
    return std::string("ok");
  });
  auto client = make_client(t);
  client->query("hello", [](std::string_view) { return true; });
  EXPECT_EQ(seen.prompt, "hello");
  EXPECT_EQ(seen.model, "mock");
  EXPECT_EQ(seen.temperature, 0.0);
  client->query("hello", 0.7, [](std::string_view) { return true; });
  EXPECT_EQ(seen.temperature, 0.7);
}

TEST(LlmClient, BoundedConcurrency) {
  std::atomic<int> live{0}, peak{0};
  auto t = std::make_shared<FnTransport>([&](const ChatRequest&) {
    int now = ++live;
    int p = peak.load();
    while (now > p && !peak.compare_exchange_weak(p, now)) {}
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
    --live;
    return std::string("ok");
  });
  auto client = make_client(t, 3);
  std::atomic<int> hook_max{0};
  client->set_in_flight_hook([&](int n) {
    int p = hook_max.load();
    while (n > p && !hook_max.compare_exchange_weak(p, n)) {}
  });
  parallel_for(60, 12, [&](std::size_t) {
    client->query("p", [](std::string_view) { return true; });
  });
  EXPECT_LE(peak.load(), 3);
  EXPECT_LE(hook_max.load(), 3);
  EXPECT_LE(client->stats().peak_in_flight, 3);
  EXPECT_EQ(client->stats().calls, 60);
}

TEST(LlmClient, MemoOffByDefaultAndExactWhenOn) {
  auto t = std::make_shared<FnTransport>([](const ChatRequest&) { return std::string("r"); });
  auto client = make_client(t);
  client->query("p", [](std::string_view) { return true; });
  client->query("p", [](std::string_view) { return true; });
  EXPECT_EQ(t->calls, 2);

  LlmClientConfig c = client->config();
  c.memoize = true;
  auto t2 = std::make_shared<FnTransport>([](const ChatRequest&) { return std::string("r"); });
  LlmClient memo(c, t2);
  memo.query("p", [](std::string_view) { return true; });
  memo.query("p", [](std::string_view) { return true; });
  memo.query("q", [](std::string_view) { return true; });
  EXPECT_EQ(t2->calls, 2);
  EXPECT_EQ(memo.stats().memo_hits, 1);
}

TEST(LlmClientConfig, Validation) {
  LlmClientConfig c;
  c.endpoint = "http://x";
  c.model_name = "m";
  EXPECT_NO_THROW(validate_config(c));
  c.temperature = -0.1;
  EXPECT_THROW(validate_config(c), std::invalid_argument);
  c.temperature = 0;
  c.max_in_flight = 0;
  EXPECT_THROW(validate_config(c), std::invalid_argument);
}

TEST(OpenAITransport, WireFormat) {
  ChatRequest r{"gpt", "hi", 0.0, 1.0, 64};
  auto body = nlohmann::json::parse(OpenAIChatTransport::request_body(r));
  EXPECT_EQ(body["model"], "gpt");
  EXPECT_EQ(body["messages"][0]["role"], "user");
  EXPECT_EQ(body["messages"][0]["content"], "hi");
  EXPECT_EQ(body["temperature"], 0.0);
  EXPECT_EQ(body["max_tokens"], 64);
  EXPECT_EQ(OpenAIChatTransport::parse_response_body(
                R"({"choices":[{"message":{"role":"assistant","content":"yo"}}]})"),
            "yo");
  EXPECT_THROW(OpenAIChatTransport::parse_response_body("{}"), TransportError);
  EXPECT_THROW(OpenAIChatTransport::parse_response_body("not json"), TransportError);
}

TEST(OpenAITransport, AgainstLocalServer) {
  testing_support::MockOpenAIServer server([](const std::string& prompt) {
    return std::optional<std::string>(testing_support::exact_match_judge_reply(prompt));
  });
  LlmClientConfig c;
  c.endpoint = server.endpoint();
  c.model_name = "mock";
  c.backoff_base = std::chrono::milliseconds(1);
  auto client = make_http_client(c);
  auto assets = testing_support::shipped_assets();
  auto v = run_judge(two_items(), *client, assets);
  EXPECT_EQ(v.rank, 2);
  EXPECT_EQ(server.calls(), 1);
}

TEST(OpenAITransport, ServerErrorsAreTransportFailures) {
  testing_support::MockOpenAIServer server(
      [](const std::string&) { return std::optional<std::string>(); });
  LlmClientConfig c;
  c.endpoint = server.endpoint();
  c.model_name = "mock";
  c.max_retries = 1;
  c.backoff_base = std::chrono::milliseconds(1);
  auto client = make_http_client(c);
  EXPECT_THROW(client->query("p", [](std::string_view) { return true; }),
               JudgeUnavailable);
  EXPECT_EQ(server.calls(), 2);
}
