#include "listreward/commands.h"

#include <atomic>
#include <chrono>
#include <csignal>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <thread>

#include "CLI11.hpp"
#include "listreward/convert.h"
#include "listreward/metric.h"
#include "listreward/parse.h"
#include "listreward/report.h"
#include "listreward/responses.h"
#include "listreward/reward.h"
#include "listreward/service.h"
#include "listreward/text.h"
#include "listreward/util.h"

namespace listreward::cli {
namespace {

namespace fs = std::filesystem;

struct Options {
  std::string dataset;
  std::string responses;
  std::string reward;
  std::optional<double> lambda;
  bool format_reward = false;
  bool judge = false;
  std::string judge_endpoint;
  std::string judge_model;
  std::string judge_protocol = "full";
  int max_in_flight = 4;
  int max_retries = 3;
  int timeout_s = 60;
  double threshold = kDefaultConfidenceThreshold;
  bool resume = false;
  std::optional<std::size_t> max_records;
  std::string out_dir = "out";
  std::string assets;
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  std::string bind = "127.0.0.1";
  int port = 8080;
  std::string in;
};

// Error already reported to the user; carries the exit code.
struct Exit {
  int code;
};

AssetStore make_assets(const Options& o) {
  return o.assets.empty() ? AssetStore::from_environment() : AssetStore(o.assets);
}

std::vector<QuestionRecord> load_dataset(
    const Options& o, std::ostream& err,
    std::optional<AnswerFormat> expected = std::nullopt) {
  if (o.dataset.empty()) {
    err << "error: --dataset is required\n";
    throw Exit{kExitUsage};
  }
  try {
    return load_records(o.dataset, expected);
  } catch (const SchemaError& e) {
    err << o.dataset << ":" << e.line() << ": " << e.what() << "\n";
  } catch (const DuplicateId& e) {
    err << o.dataset << ":" << e.line() << ": " << e.what() << "\n";
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << "\n";
  }
  throw Exit{kExitSchema};
}

std::vector<ResponseLine> load_response_file(const Options& o,
                                             std::ostream& err) {
  if (o.responses.empty()) {
    err << "error: --responses is required\n";
    throw Exit{kExitUsage};
  }
  try {
    return load_responses(o.responses);
  } catch (const SchemaError& e) {
    err << o.responses << ":" << e.line() << ": " << e.what() << "\n";
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << "\n";
  }
  throw Exit{kExitSchema};
}

// Record for each response, in response order.
std::vector<const QuestionRecord*> resolve(
    const Options& o, const std::vector<QuestionRecord>& records,
    const std::vector<ResponseLine>& responses, std::ostream& err) {
  std::map<std::string, const QuestionRecord*> by_id;
  for (const auto& r : records) by_id.emplace(r.record_id, &r);
  std::vector<const QuestionRecord*> out;
  out.reserve(responses.size());
  for (const auto& resp : responses) {
    auto it = by_id.find(resp.record_id);
    if (it == by_id.end()) {
      err << o.responses << ":" << resp.line << ": unknown record id '"
          << resp.record_id << "'\n";
      throw Exit{kExitSchema};
    }
    out.push_back(it->second);
  }
  return out;
}

LlmClientConfig judge_config(const Options& o, std::ostream& err) {
  if (o.judge_endpoint.empty() || o.judge_model.empty()) {
    err << "error: --judge-endpoint and --judge-model are required\n";
    throw Exit{kExitUsage};
  }
  LlmClientConfig c;
  c.endpoint = o.judge_endpoint;
  c.model_name = o.judge_model;
  c.max_in_flight = o.max_in_flight;
  c.max_retries = o.max_retries;
  c.timeout = std::chrono::seconds(o.timeout_s);
  try {
    validate_config(c);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    throw Exit{kExitUsage};
  }
  return c;
}

JudgeProtocol mrr_protocol(const Options& o, std::ostream& err) {
  if (o.judge_protocol == "full") return JudgeProtocol::kFullMrr;
  if (o.judge_protocol == "simple") return JudgeProtocol::kSimpleMrr;
  err << "error: --judge-protocol must be full or simple\n";
  throw Exit{kExitUsage};
}

void prepare_out_dir(const Options& o) { fs::create_directories(o.out_dir); }

void write_json(const fs::path& path, const ojson& j) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << j.dump(2) << '\n';
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
}

RunManifest start_manifest(const std::string& command, const Options& o) {
  RunManifest m;
  m.command = command;
  m.started = utc_timestamp();
  for (const std::string& p : {o.dataset, o.responses}) {
    if (!p.empty() && fs::exists(p)) m.input_checksums[p] = sha256_file(p);
  }
  return m;
}

void finish_manifest(RunManifest& m, const Options& o, const std::string& status) {
  m.status = status;
  m.finished = utc_timestamp();
  m.write(fs::path(o.out_dir) / "manifest.json");
}

std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

// --- score ----------------------------------------------------------------

int cmd_score(const Options& o, std::ostream& out, std::ostream& err) {
  auto records = load_dataset(o, err);
  auto responses = load_response_file(o, err);
  auto targets = resolve(o, records, responses, err);

  std::optional<RewardKind> kind;
  if (!o.reward.empty()) {
    kind = parse_reward_kind(o.reward);
    if (!kind) {
      err << "error: unknown reward '" << o.reward << "'\n";
      return kExitUsage;
    }
  }
  for (std::size_t i = 0; i < responses.size(); ++i) {
    try {
      check_compatible(kind.value_or(default_reward_kind(targets[i]->format)),
                       targets[i]->format);
    } catch (const IncompatibleFormat& e) {
      err << o.responses << ":" << responses[i].line << ": " << e.what() << "\n";
      return kExitSchema;
    }
  }

  AssetStore assets = make_assets(o);
  std::shared_ptr<LlmClient> judge;
  RewardConfig base;
  base.use_format_reward = o.format_reward;
  base.lambda = o.lambda;
  if (kind == RewardKind::kListJudgeMrr) {
    judge = make_http_client(judge_config(o, err));
    base.judge = JudgeBinding{judge.get(), &assets, mrr_protocol(o, err)};
  }
  if (base.lambda && !kind) {
    err << "error: --lambda needs --reward list-acc or list-mrr\n";
    return kExitUsage;
  }
  try {
    base.kind = kind.value_or(RewardKind::kMcq);
    if (kind) validate_config(base);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  prepare_out_dir(o);
  RunManifest manifest = start_manifest("score", o);
  manifest.config["reward"] = kind ? std::string(to_string(*kind)) : "per-format";
  manifest.config["format_reward"] = o.format_reward;
  if (o.lambda) manifest.config["lambda"] = *o.lambda;
  if (judge) {
    manifest.config["judge_model"] = o.judge_model;
    manifest.config["judge_protocol"] = o.judge_protocol;
    std::string name = judge_template_name(base.judge->protocol);
    manifest.template_checksums[name] = assets.checksum(name);
  }

  std::vector<RewardOutcome> outcomes(responses.size());
  unsigned workers = judge ? static_cast<unsigned>(o.max_in_flight) : o.workers;
  try {
    parallel_for(responses.size(), workers, [&](std::size_t i) {
      RewardConfig config = base;
      if (!kind) config.kind = default_reward_kind(targets[i]->format);
      outcomes[i] = score_response(
          RawResponse{responses[i].text, responses[i].tokens}, *targets[i], config);
    });
  } catch (const JudgeUnavailable& e) {
    err << "error: judge unavailable: " << e.what() << "\n";
    finish_manifest(manifest, o, "FAILED");
    return kExitJudge;
  }

  std::ofstream lines(fs::path(o.out_dir) / "outcomes.jsonl",
                      std::ios::binary | std::ios::trunc);
  double sum_total = 0.0, sum_correct = 0.0;
  std::size_t correct = 0, well_formed = 0;
  for (std::size_t i = 0; i < responses.size(); ++i) {
    RewardKind k = kind.value_or(default_reward_kind(targets[i]->format));
    ojson line;
    line["id"] = responses[i].record_id;
    line["reward"] = std::string(to_string(k));
    ojson fields = outcome_to_json(outcomes[i]);
    for (auto& [key, value] : fields.items()) line[key] = value;
    lines << line.dump() << '\n';
    sum_total += outcomes[i].total;
    sum_correct += outcomes[i].correctness;
    if (outcomes[i].correctness > 0.0) ++correct;
    if (extract_think_structure(responses[i].text).well_formed) ++well_formed;
  }
  lines.close();

  const double n = static_cast<double>(std::max<std::size_t>(1, responses.size()));
  ojson summary;
  summary["n"] = responses.size();
  summary["accuracy"] = static_cast<double>(correct) / n;
  summary["mean_correctness"] = sum_correct / n;
  summary["mean_total"] = sum_total / n;
  summary["format_pass_rate"] = static_cast<double>(well_formed) / n;
  write_json(fs::path(o.out_dir) / "summary.json", summary);
  finish_manifest(manifest, o, "OK");

  out << "n=" << responses.size()
      << " accuracy=" << fixed3(summary["accuracy"].get<double>())
      << " mean_correctness=" << fixed3(sum_correct / n)
      << " mean_total=" << fixed3(sum_total / n)
      << " format_pass_rate=" << fixed3(static_cast<double>(well_formed) / n)
      << "\n";
  return kExitOk;
}

// --- eval -----------------------------------------------------------------

std::string short_answer(std::string_view text) {
  std::string_view region = answer_region(text);
  if (auto boxed = extract_boxed(region)) return std::string(trim(*boxed));
  return std::string(trim(region));
}

int cmd_eval(const Options& o, std::ostream& out, std::ostream& err) {
  auto records = load_dataset(o, err);
  auto responses = load_response_file(o, err);
  auto targets = resolve(o, records, responses, err);

  AssetStore assets = make_assets(o);
  std::shared_ptr<LlmClient> judge;
  JudgeProtocol protocol = JudgeProtocol::kFullMrr;
  if (o.judge) {
    judge = make_http_client(judge_config(o, err));
    protocol = mrr_protocol(o, err);
  }

  prepare_out_dir(o);
  RunManifest manifest = start_manifest("eval", o);
  manifest.config["judge"] = o.judge;
  if (judge) {
    manifest.config["judge_model"] = o.judge_model;
    manifest.config["judge_protocol"] = o.judge_protocol;
    for (JudgeProtocol p : {protocol, JudgeProtocol::kQaAcc}) {
      std::string name = judge_template_name(p);
      manifest.template_checksums[name] = assets.checksum(name);
    }
  }

  std::vector<EvalRecord> evals(responses.size());
  parallel_for(responses.size(), o.workers, [&](std::size_t i) {
    const QuestionRecord& rec = *targets[i];
    RewardConfig config;
    config.kind = default_reward_kind(rec.format);
    EvalRecord& e = evals[i];
    e.record_id = rec.record_id;
    e.benchmark = rec.benchmark;
    e.format = rec.format;
    e.response_tokens = responses[i].tokens;
    e.outcome = score_response(RawResponse{responses[i].text, responses[i].tokens},
                               rec, config);
    if (rec.format == AnswerFormat::kList) {
      e.list_items = parse_ranked_list(answer_region(responses[i].text));
    }
  });

  bool judge_failed = false;
  if (judge) {
    std::vector<std::size_t> judged;
    for (std::size_t i = 0; i < evals.size(); ++i) {
      if (evals[i].format != AnswerFormat::kMcq) judged.push_back(i);
    }
    std::vector<JudgeVerdict> verdicts(judged.size());
    try {
      parallel_for(judged.size(), static_cast<unsigned>(o.max_in_flight),
                   [&](std::size_t j) {
        std::size_t i = judged[j];
        const QuestionRecord& rec = *targets[i];
        JudgeRequest req{rec.question, rec.gold, {}, protocol};
        if (rec.format == AnswerFormat::kList) {
          req.items = *evals[i].list_items;
        } else {
          req.protocol = JudgeProtocol::kQaAcc;
          std::string answer = short_answer(responses[i].text);
          if (!answer.empty()) req.items = {answer};
        }
        if (req.items.empty()) {
          verdicts[j].parse_ok = true;
          return;
        }
        verdicts[j] = run_judge(req, *judge, assets);
      });
      attach_judge(evals, verdicts);
    } catch (const JudgeUnavailable& e) {
      err << "error: judge unavailable: " << e.what() << "\n";
      judge_failed = true;
    }
  }
  const bool judged = judge && !judge_failed;

  // Group by benchmark; a benchmark spanning formats splits into
  // benchmark/format rows.
  std::map<std::string, std::set<AnswerFormat>> formats_of;
  for (const auto& e : evals) formats_of[e.benchmark].insert(e.format);
  std::map<std::string, std::vector<EvalRecord>> groups;
  for (const auto& e : evals) {
    std::string key = formats_of[e.benchmark].size() > 1
                          ? e.benchmark + "/" + std::string(to_string(e.format))
                          : e.benchmark;
    groups[key].push_back(e);
  }

  ojson report;
  ojson benchmarks = ojson::object();
  ReportRows rows;
  std::map<AnswerFormat, std::map<std::string, MetricReport>> by_format;
  for (const auto& [name, group] : groups) {
    MetricReport r = build_report(group, judged);
    benchmarks[name] = report_to_json(r);
    rows.emplace_back(name, r);
    by_format[r.format].emplace(name, r);
  }
  ojson aggregates = ojson::object();
  for (const auto& [format, reports] : by_format) {
    MetricReport agg = aggregate(reports);
    aggregates[std::string(to_string(format))] = report_to_json(agg);
    rows.emplace_back("average[" + std::string(to_string(format)) + "]", agg);
  }
  report["benchmarks"] = std::move(benchmarks);
  report["aggregate"] = std::move(aggregates);
  write_json(fs::path(o.out_dir) / "report.json", report);
  std::string table = render_table(rows);
  write_text(fs::path(o.out_dir) / "report.txt", table);
  finish_manifest(manifest, o, judge_failed ? "FAILED" : "OK");
  out << table;
  return judge_failed ? kExitJudge : kExitOk;
}

// --- convert --------------------------------------------------------------

std::set<std::string> ids_in(const fs::path& path) {
  std::set<std::string> ids;
  std::ifstream in(path, std::ios::binary);
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ojson j = ojson::parse(line, nullptr, false);
    if (j.is_object() && j.contains("id") && j["id"].is_string()) {
      ids.insert(j["id"].get<std::string>());
    }
  }
  return ids;
}

int cmd_convert(const Options& o, std::ostream& out, std::ostream& err) {
  auto records = load_dataset(o, err, AnswerFormat::kMcq);
  if (!(o.threshold >= 0.0 && o.threshold <= 1.0)) {
    err << "error: --threshold must lie in [0, 1]\n";
    return kExitUsage;
  }
  LlmClientConfig config = judge_config(o, err);
  config.temperature = kConversionTemperature;
  auto client = make_http_client(config);
  AssetStore assets = make_assets(o);

  prepare_out_dir(o);
  const fs::path converted_path = fs::path(o.out_dir) / "converted.jsonl";
  const fs::path skipped_path = fs::path(o.out_dir) / "skipped.jsonl";
  std::set<std::string> done;
  if (o.resume) {
    done = ids_in(converted_path);
    for (const auto& id : ids_in(skipped_path)) done.insert(id);
  }
  auto mode = std::ios::binary | (o.resume ? std::ios::app : std::ios::trunc);
  std::ofstream converted(converted_path, mode);
  std::ofstream skipped(skipped_path, mode);

  RunManifest manifest = start_manifest("convert", o);
  manifest.config["threshold"] = o.threshold;
  manifest.config["model"] = o.judge_model;
  manifest.config["temperature"] = kConversionTemperature;
  manifest.config["resume"] = o.resume;
  manifest.template_checksums[kConversionAsset] = assets.checksum(kConversionAsset);

  std::vector<const QuestionRecord*> pending;
  for (const auto& r : records) {
    if (!done.count(r.record_id)) pending.push_back(&r);
  }
  if (o.max_records && pending.size() > *o.max_records) {
    pending.resize(*o.max_records);
  }

  std::size_t n_converted = 0, n_skipped = 0;
  bool failed = false;
  const std::size_t chunk = static_cast<std::size_t>(std::max(1, o.max_in_flight));
  for (std::size_t begin = 0; begin < pending.size() && !failed; begin += chunk) {
    std::size_t end = std::min(pending.size(), begin + chunk);
    std::vector<std::optional<ConversionResult>> results(end - begin);
    std::vector<std::string> errors(end - begin);
    parallel_for(end - begin, static_cast<unsigned>(chunk), [&](std::size_t j) {
      try {
        results[j] = convert_mcq(*pending[begin + j], *client, assets);
      } catch (const JudgeUnavailable& e) {
        errors[j] = e.what();
      } catch (const ReplyParseError& e) {
        errors[j] = e.what();
      }
    });
    for (std::size_t j = 0; j < results.size(); ++j) {
      if (!results[j]) {
        err << "error: " << pending[begin + j]->record_id << ": " << errors[j]
            << "\n";
        failed = true;
        continue;
      }
      auto kept = filter_by_confidence({*results[j]}, o.threshold);
      if (!kept.empty()) {
        converted << record_to_json_line(*kept.front().record) << '\n';
        ++n_converted;
      } else {
        ojson s;
        s["id"] = results[j]->source_id;
        s["reason"] = results[j]->verdict.convertible ? "low_confidence"
                                                      : "not_convertible";
        s["confidence"] = results[j]->verdict.confidence;
        s["rationale"] = results[j]->verdict.rationale;
        skipped << s.dump() << '\n';
        ++n_skipped;
      }
    }
    converted.flush();
    skipped.flush();
  }
  finish_manifest(manifest, o, failed ? "FAILED" : "OK");
  out << "converted=" << n_converted << " skipped=" << n_skipped
      << " already_done=" << done.size() << "\n";
  return failed ? kExitJudge : kExitOk;
}

// --- reval-multi ----------------------------------------------------------

int cmd_reval_multi(const Options& o, std::ostream& out, std::ostream& err) {
  auto records = load_dataset(o, err);
  auto responses = load_response_file(o, err);
  auto targets = resolve(o, records, responses, err);
  for (std::size_t i = 0; i < responses.size(); ++i) {
    if (targets[i]->format == AnswerFormat::kMcq || !targets[i]->valid_answers) {
      err << o.responses << ":" << responses[i].line << ": record '"
          << targets[i]->record_id
          << "' has no valid_answers (or is multiple-choice)\n";
      return kExitSchema;
    }
  }

  prepare_out_dir(o);
  RunManifest manifest = start_manifest("reval-multi", o);
  manifest.config["match"] = "normalized-exact";

  MultiValidTally tally;
  std::ofstream lines(fs::path(o.out_dir) / "reval.jsonl",
                      std::ios::binary | std::ios::trunc);
  for (std::size_t i = 0; i < responses.size(); ++i) {
    const QuestionRecord& rec = *targets[i];
    EvalRecord e;
    e.record_id = rec.record_id;
    e.benchmark = rec.benchmark;
    e.format = AnswerFormat::kList;
    e.list_items = parse_ranked_list(answer_region(responses[i].text));
    RankedScore s = reward_mrr(*e.list_items, rec.gold);
    e.outcome.correctness = s.rank ? 1.0 : 0.0;
    e.outcome.total = e.outcome.correctness;
    e.outcome.rank = s.rank;
    e.outcome.list_length = static_cast<int>(e.list_items->size());
    MultiValidOutcome m = multi_valid_reclassify(e, *rec.valid_answers);
    tally.add(m, rec.valid_answers->size());

    ojson line;
    line["id"] = rec.record_id;
    line["original_correct"] = s.rank.has_value();
    line["category"] = std::string(to_string(m.category));
    if (m.coverage) line["coverage"] = std::string(to_string(*m.coverage));
    line["valid_answers"] = rec.valid_answers->size();
    lines << line.dump() << '\n';
  }
  lines.close();

  ojson t;
  t["total"] = tally.total;
  t["categories"] = {{"CORRECT_KEPT", tally.correct_kept},
                     {"INCORRECT_TO_VALID", tally.incorrect_to_valid},
                     {"STILL_INCORRECT", tally.still_incorrect}};
  t["coverage"] = {{"ALL_VALID_COVERED", tally.all_valid_covered},
                   {"PARTIAL", tally.partial}};
  t["originally_correct"] = {
      {"ALL_VALID_COVERED", tally.correct_all_valid_covered},
      {"ALL_VALID_COVERED_MULTI_VALID", tally.correct_all_valid_covered_multi},
      {"PARTIAL", tally.correct_partial}};
  write_json(fs::path(o.out_dir) / "tallies.json", t);
  finish_manifest(manifest, o, "OK");

  out << "total=" << tally.total << " CORRECT_KEPT=" << tally.correct_kept
      << " INCORRECT_TO_VALID=" << tally.incorrect_to_valid
      << " STILL_INCORRECT=" << tally.still_incorrect
      << " ALL_VALID_COVERED=" << tally.all_valid_covered
      << " PARTIAL=" << tally.partial << "\n";
  return kExitOk;
}

// --- serve ----------------------------------------------------------------

std::atomic<bool> g_stop_requested{false};

extern "C" void on_stop_signal(int) { g_stop_requested = true; }

int cmd_serve(const Options& o, std::ostream& out, std::ostream& err) {
  ServiceOptions so;
  if (!o.dataset.empty()) so.dataset = load_dataset(o, err);
  if (!o.judge_endpoint.empty() || !o.judge_model.empty()) {
    so.judge = make_http_client(judge_config(o, err));
  }
  if (!o.assets.empty()) so.asset_dir = o.assets;
  so.workers = o.workers;
  ScoringService service(std::move(so));

  g_stop_requested = false;
  std::signal(SIGINT, on_stop_signal);
  std::signal(SIGTERM, on_stop_signal);
  std::atomic<bool> done{false};
  std::thread watcher([&] {
    while (!done) {
      if (g_stop_requested) {
        service.stop();
        break;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(100));
    }
  });

  out << "listening on " << o.bind << ":" << o.port << std::endl;
  bool ok = service.listen(o.bind, o.port);
  done = true;
  watcher.join();
  std::signal(SIGINT, SIG_DFL);
  std::signal(SIGTERM, SIG_DFL);
  if (!ok && !g_stop_requested) {
    err << "error: cannot bind " << o.bind << ":" << o.port << "\n";
    return kExitUsage;
  }
  return kExitOk;
}

// --- report ---------------------------------------------------------------

int cmd_report(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.in.empty()) {
    err << "error: --in <report.json> is required\n";
    return kExitUsage;
  }
  ojson j;
  try {
    j = ojson::parse(read_file(o.in));
  } catch (const std::exception& e) {
    err << "error: cannot read report " << o.in << ": " << e.what() << "\n";
    return kExitSchema;
  }
  ReportRows rows;
  try {
    for (const auto& [name, r] : j.at("benchmarks").items()) {
      rows.emplace_back(name, report_from_json(r));
    }
    for (const auto& [format, r] : j.at("aggregate").items()) {
      rows.emplace_back("average[" + format + "]", report_from_json(r));
    }
  } catch (const std::exception& e) {
    err << "error: malformed report " << o.in << ": " << e.what() << "\n";
    return kExitSchema;
  }
  out << render_table(rows);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  Options o;
  CLI::App app{"Verifiable rewards and ranked-list metrics for model answers",
               "listreward"};
  app.require_subcommand(1);
  app.set_version_flag("--version", LISTREWARD_VERSION);

  auto add_inputs = [&](CLI::App* cmd, bool responses) {
    cmd->add_option("--dataset", o.dataset, "Dataset JSONL");
    if (responses) cmd->add_option("--responses", o.responses, "Responses JSONL");
    cmd->add_option("--out", o.out_dir, "Output directory")->capture_default_str();
    cmd->add_option("--assets", o.assets, "Prompt asset directory");
    cmd->add_option("--workers", o.workers, "Scoring threads");
  };
  auto add_judge = [&](CLI::App* cmd) {
    cmd->add_option("--judge-endpoint,--endpoint", o.judge_endpoint,
                    "OpenAI-compatible API base URL");
    cmd->add_option("--judge-model,--model", o.judge_model, "Model name");
    cmd->add_option("--judge-protocol", o.judge_protocol, "full or simple")
        ->capture_default_str();
    cmd->add_option("--max-in-flight", o.max_in_flight)->capture_default_str();
    cmd->add_option("--max-retries", o.max_retries)->capture_default_str();
    cmd->add_option("--timeout", o.timeout_s, "Seconds per call")
        ->capture_default_str();
  };

  auto* score = app.add_subcommand("score", "Score responses with a reward");
  add_inputs(score, true);
  add_judge(score);
  score->add_option("--reward", o.reward,
                    "mcq|qa|list-acc|list-mrr|list-judge-mrr (default per format)");
  score->add_option("--lambda", o.lambda, "Length-penalty coefficient");
  score->add_flag("--format-reward", o.format_reward, "Average in the format reward");

  auto* eval = app.add_subcommand("eval", "Compute evaluation metrics");
  add_inputs(eval, true);
  add_judge(eval);
  eval->add_flag("--judge", o.judge, "Add LLM-judged metrics");

  auto* convert = app.add_subcommand("convert", "Convert MCQ records to open QA");
  add_inputs(convert, false);
  add_judge(convert);
  convert->add_option("--threshold", o.threshold, "Minimum confidence")
      ->capture_default_str();
  convert->add_flag("--resume", o.resume, "Continue a previous run");
  convert->add_option("--max-records", o.max_records,
                      "Stop after this many new records");

  auto* reval = app.add_subcommand("reval-multi",
                                   "Re-score lists against multiple valid answers");
  add_inputs(reval, true);

  auto* serve = app.add_subcommand("serve", "Run the batch scoring service");
  serve->add_option("--dataset", o.dataset, "Dataset JSONL for record_id lookups");
  serve->add_option("--bind", o.bind)->capture_default_str();
  serve->add_option("--port", o.port)->capture_default_str();
  serve->add_option("--assets", o.assets, "Prompt asset directory");
  serve->add_option("--workers", o.workers, "Scoring threads");
  add_judge(serve);

  auto* report = app.add_subcommand("report", "Render a report.json as a table");
  report->add_option("--in", o.in, "report.json written by eval")->required();

  std::vector<std::string> argv_store;
  argv_store.reserve(args.size() + 1);
  argv_store.emplace_back("listreward");
  for (const auto& a : args) argv_store.push_back(a);
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*score) return cmd_score(o, out, err);
    if (*eval) return cmd_eval(o, out, err);
    if (*convert) return cmd_convert(o, out, err);
    if (*reval) return cmd_reval_multi(o, out, err);
    if (*serve) return cmd_serve(o, out, err);
    if (*report) return cmd_report(o, out, err);
  } catch (const Exit& e) {
    return e.code;
  } catch (const TemplateMissing& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace listreward::cli
