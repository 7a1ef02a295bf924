#include "listreward/service.h"

#include <rapidjson/document.h>
#include <rapidjson/error/en.h>
#include <rapidjson/stringbuffer.h>
#include <rapidjson/writer.h>

#include "httplib.h"
#include "listreward/report.h"
#include "listreward/reward.h"
#include "listreward/util.h"

namespace listreward {
namespace {

struct PairError {
  std::size_t index;
  std::string code;
  std::string message;
};

ScoringService::Reply error_reply(int status, const std::string& message) {
  ojson j;
  j["v"] = kWireVersion;
  j["error"] = message;
  return {status, j.dump()};
}

// Builds an inline record from a pair object. Throws SchemaError.
QuestionRecord inline_record(const ojson& pair, std::size_t index) {
  ojson obj = ojson::object();
  obj["id"] = "inline-" + std::to_string(index);
  obj["benchmark"] = pair.value("benchmark", std::string("inline"));
  obj["question"] = pair.value("question", std::string());
  if (auto it = pair.find("options"); it != pair.end()) obj["options"] = *it;
  obj["gold"] = pair.at("gold");
  obj["format"] = pair.at("format");
  if (auto it = pair.find("valid_answers"); it != pair.end()) {
    obj["valid_answers"] = *it;
  }
  return record_from_json_line(obj.dump(), index);
}

// Batch bodies can be megabytes; the request is parsed in place with
// RapidJSON and only small subtrees are handed to nlohmann.
using RjValue = rapidjson::Value;

ojson to_ojson(const RjValue& v) {
  rapidjson::StringBuffer buf;
  rapidjson::Writer<rapidjson::StringBuffer> w(buf);
  v.Accept(w);
  return ojson::parse(std::string_view(buf.GetString(), buf.GetSize()));
}

const RjValue* member(const RjValue& obj, const char* name) {
  auto it = obj.FindMember(name);
  return it == obj.MemberEnd() ? nullptr : &it->value;
}

}  // namespace

ScoringService::ScoringService(ServiceOptions options)
    : options_(std::move(options)),
      assets_(options_.asset_dir),
      server_(std::make_unique<httplib::Server>()) {
  for (const auto& r : options_.dataset) by_id_.emplace(r.record_id, &r);
  install_routes();
}

ScoringService::~ScoringService() = default;

ScoringService::Reply ScoringService::health() const {
  ojson j;
  j["v"] = kWireVersion;
  j["status"] = "ok";
  j["version"] = LISTREWARD_VERSION;
  return {200, j.dump()};
}

ScoringService::Reply ScoringService::config() const {
  ojson j;
  j["v"] = kWireVersion;
  j["version"] = LISTREWARD_VERSION;
  j["records"] = options_.dataset.size();
  j["judge"] = options_.judge ? ojson(options_.judge->config().model_name)
                              : ojson(nullptr);
  j["workers"] = options_.workers;
  ojson rewards = ojson::array();
  for (RewardKind k : {RewardKind::kMcq, RewardKind::kQa, RewardKind::kListAcc,
                       RewardKind::kListMrr, RewardKind::kListJudgeMrr}) {
    rewards.push_back(std::string(to_string(k)));
  }
  j["rewards"] = std::move(rewards);
  return {200, j.dump()};
}

ScoringService::Reply ScoringService::score(std::string_view body) const {
  std::string buffer(body);
  rapidjson::Document doc;
  doc.ParseInsitu<rapidjson::kParseValidateEncodingFlag>(buffer.data());
  if (doc.HasParseError() || !doc.IsObject()) {
    return error_reply(400, "request body is not a JSON object");
  }
  const RjValue* version = member(doc, "v");
  if (version == nullptr || !version->IsInt() || version->GetInt() != kWireVersion) {
    return error_reply(400, "unsupported or missing wire version \"v\"");
  }
  const RjValue* pairs_value = member(doc, "pairs");
  if (pairs_value == nullptr || !pairs_value->IsArray()) {
    return error_reply(400, "\"pairs\" must be an array");
  }

  // Config projection: reward kind, lambda, format reward, judge protocol.
  std::optional<RewardKind> kind;
  RewardConfig base;
  const RjValue* cfg_value = member(doc, "config");
  const ojson cfg = cfg_value ? to_ojson(*cfg_value) : ojson::object();
  if (!cfg.is_object()) return error_reply(400, "\"config\" must be an object");
  if (auto it = cfg.find("reward"); it != cfg.end() && !it->is_null()) {
    if (!it->is_string() || !(kind = parse_reward_kind(it->get<std::string>()))) {
      return error_reply(400, "unknown reward kind");
    }
  }
  if (auto it = cfg.find("lambda"); it != cfg.end() && !it->is_null()) {
    if (!it->is_number()) return error_reply(400, "lambda must be a number");
    base.lambda = it->get<double>();
  }
  if (auto it = cfg.find("format_reward"); it != cfg.end()) {
    if (!it->is_boolean()) return error_reply(400, "format_reward must be boolean");
    base.use_format_reward = it->get<bool>();
  }
  JudgeProtocol protocol = JudgeProtocol::kFullMrr;
  if (auto it = cfg.find("judge_protocol"); it != cfg.end()) {
    std::string p = it->is_string() ? it->get<std::string>() : "";
    if (p == "simple") {
      protocol = JudgeProtocol::kSimpleMrr;
    } else if (p != "full") {
      return error_reply(400, "judge_protocol must be full or simple");
    }
  }
  if (kind == RewardKind::kListJudgeMrr) {
    if (!options_.judge) return error_reply(400, "no judge configured");
    base.judge = JudgeBinding{options_.judge.get(), &assets_, protocol};
  }
  if (kind) {
    base.kind = *kind;
    try {
      validate_config(base);
    } catch (const ConfigError& e) {
      return error_reply(400, e.what());
    }
  } else if (base.lambda) {
    return error_reply(400, "lambda needs an explicit list reward");
  }

  const auto pairs = pairs_value->GetArray();
  const std::size_t n = pairs.Size();
  std::vector<std::optional<RewardOutcome>> outcomes(n);
  std::vector<std::optional<PairError>> errors(n);
  std::vector<std::optional<QuestionRecord>> inline_records(n);
  std::vector<const QuestionRecord*> records(n, nullptr);
  std::vector<std::string> texts(n);

  for (std::size_t i = 0; i < n; ++i) {
    const RjValue& p = pairs[static_cast<rapidjson::SizeType>(i)];
    if (!p.IsObject()) {
      errors[i] = PairError{i, "invalid_pair", "pair must be an object"};
      continue;
    }
    const RjValue* resp = member(p, "response");
    if (resp == nullptr || !resp->IsString()) {
      errors[i] = PairError{i, "missing_response", "response must be a string"};
      continue;
    }
    texts[i].assign(resp->GetString(), resp->GetStringLength());
    if (const RjValue* id = member(p, "record_id")) {
      auto found =
          id->IsString()
              ? by_id_.find(std::string(id->GetString(), id->GetStringLength()))
              : by_id_.end();
      if (found == by_id_.end()) {
        errors[i] = PairError{i, "unknown_record", "record_id not in dataset"};
        continue;
      }
      records[i] = found->second;
    } else if (p.HasMember("gold") && p.HasMember("format")) {
      try {
        inline_records[i] = inline_record(to_ojson(p), i);
        records[i] = &*inline_records[i];
      } catch (const std::exception& e) {
        errors[i] = PairError{i, "invalid_record", e.what()};
        continue;
      }
    } else {
      errors[i] = PairError{i, "invalid_pair", "need record_id or gold and format"};
      continue;
    }
    try {
      check_compatible(kind.value_or(default_reward_kind(records[i]->format)),
                       records[i]->format);
    } catch (const IncompatibleFormat& e) {
      errors[i] = PairError{i, "incompatible_format", e.what()};
      records[i] = nullptr;
    }
  }

  unsigned workers = options_.workers;
  if (kind == RewardKind::kListJudgeMrr && options_.judge) {
    workers = std::max<unsigned>(
        workers, static_cast<unsigned>(options_.judge->config().max_in_flight));
  }
  try {
    parallel_for(n, workers, [&](std::size_t i) {
      if (records[i] == nullptr) return;
      RewardConfig config = base;
      if (!kind) config.kind = default_reward_kind(records[i]->format);
      outcomes[i] = score_response(RawResponse{texts[i], std::nullopt},
                                   *records[i], config);
    });
  } catch (const JudgeUnavailable& e) {
    return error_reply(503, std::string("judge unavailable: ") + e.what());
  }

  ojson out;
  out["v"] = kWireVersion;
  ojson outs = ojson::array();
  ojson errs = ojson::array();
  for (std::size_t i = 0; i < n; ++i) {
    if (outcomes[i]) {
      ojson o;
      o["index"] = i;
      ojson fields = outcome_to_json(*outcomes[i]);
      for (auto& [key, value] : fields.items()) o[key] = value;
      outs.push_back(std::move(o));
    } else if (errors[i]) {
      errs.push_back({{"index", i},
                      {"code", errors[i]->code},
                      {"message", errors[i]->message}});
    }
  }
  out["outcomes"] = std::move(outs);
  out["errors"] = std::move(errs);
  return {200, out.dump()};
}

void ScoringService::install_routes() {
  auto send = [](httplib::Response& res, const Reply& reply) {
    res.status = reply.status;
    res.set_content(reply.body, "application/json");
  };
  server_->Post("/v1/score", [this, send](const httplib::Request& req,
                                          httplib::Response& res) {
    send(res, score(req.body));
  });
  server_->Get("/v1/health", [this, send](const httplib::Request&,
                                          httplib::Response& res) {
    send(res, health());
  });
  server_->Get("/v1/config", [this, send](const httplib::Request&,
                                          httplib::Response& res) {
    send(res, config());
  });
}

bool ScoringService::listen(const std::string& host, int port) {
  return server_->listen(host, port);
}

int ScoringService::bind_ephemeral(const std::string& host) {
  return server_->bind_to_any_port(host);
}

bool ScoringService::serve_bound() { return server_->listen_after_bind(); }

void ScoringService::stop() { server_->stop(); }

bool ScoringService::running() const { return server_->is_running(); }

}  // namespace listreward
