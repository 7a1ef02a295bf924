#include "listreward/convert.h"

#include "json.hpp"
#include "listreward/text.h"

namespace listreward {

using json = nlohmann::json;

namespace {

// Start offsets of top-level JSON objects, scanning string literals properly.
std::vector<std::pair<std::size_t, std::size_t>> object_spans(
    std::string_view text) {
  std::vector<std::pair<std::size_t, std::size_t>> spans;
  int depth = 0;
  bool in_string = false, escaped = false;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (in_string) {
      if (escaped) {
        escaped = false;
      } else if (c == '\\') {
        escaped = true;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"' && depth > 0) {
      in_string = true;
    } else if (c == '{') {
      if (depth++ == 0) start = i;
    } else if (c == '}' && depth > 0) {
      if (--depth == 0) spans.emplace_back(start, i + 1);
    }
  }
  return spans;
}

}  // namespace

std::optional<ConversionVerdict> parse_conversion_reply(std::string_view text) {
  auto spans = object_spans(text);
  for (auto it = spans.rbegin(); it != spans.rend(); ++it) {
    json obj = json::parse(text.substr(it->first, it->second - it->first),
                           nullptr, false);
    if (obj.is_discarded() || !obj.is_object()) continue;
    auto convertible = obj.find("convertible");
    auto confidence = obj.find("confidence");
    auto rationale = obj.find("rationale");
    auto question = obj.find("question");
    if (convertible == obj.end() || !convertible->is_boolean()) return std::nullopt;
    if (confidence == obj.end() || !confidence->is_number()) return std::nullopt;
    if (rationale == obj.end() || !rationale->is_string()) return std::nullopt;
    ConversionVerdict v;
    v.convertible = convertible->get<bool>();
    v.confidence = confidence->get<double>();
    v.rationale = rationale->get<std::string>();
    if (!(v.confidence >= 0.0 && v.confidence <= 1.0)) return std::nullopt;
    if (question != obj.end() && question->is_string() &&
        !trim(question->get_ref<const std::string&>()).empty()) {
      v.converted_question = question->get<std::string>();
    }
    if (v.convertible && !v.converted_question) return std::nullopt;
    if (!v.convertible) v.converted_question.reset();
    return v;
  }
  return std::nullopt;
}

std::string render_conversion_prompt(const QuestionRecord& record,
                                     const AssetStore& assets) {
  std::string options;
  for (const auto& [label, text] : record.options) {
    if (!options.empty()) options.push_back('\n');
    options.push_back(label);
    options += ". ";
    options += text;
  }
  const std::string* gold_text =
      record.gold.empty() ? nullptr : record.option_text(record.gold[0]);
  return substitute(assets.get(kConversionAsset),
                    {{"question", record.question},
                     {"options", options},
                     {"gold_label", record.gold},
                     {"gold", gold_text ? *gold_text : ""}});
}

ConversionResult convert_mcq(const QuestionRecord& record, LlmClient& client,
                             const AssetStore& assets, double temperature) {
  if (record.format != AnswerFormat::kMcq) {
    throw IncompatibleFormat("conversion needs an MCQ record, got '" +
                             record.record_id + "'");
  }
  const std::string* gold_text = record.option_text(record.gold.at(0));
  if (gold_text == nullptr) {
    throw IncompatibleFormat("gold letter of '" + record.record_id +
                             "' names no option");
  }
  const std::string prompt = render_conversion_prompt(record, assets);
  std::string reply;
  try {
    reply = client.query(prompt, temperature, [](std::string_view r) {
      return parse_conversion_reply(r).has_value();
    });
  } catch (const JudgeUnavailable& e) {
    if (e.reason() == JudgeUnavailable::Reason::kUnparsable) {
      throw ReplyParseError("conversion reply for '" + record.record_id +
                            "' never parsed: " + e.what());
    }
    throw;
  }

  ConversionResult out;
  out.source_id = record.record_id;
  out.verdict = *parse_conversion_reply(reply);
  if (out.verdict.convertible) {
    QuestionRecord qa;
    qa.record_id = record.record_id;
    qa.benchmark = record.benchmark;
    qa.question = *out.verdict.converted_question;
    qa.gold = *gold_text;
    qa.format = AnswerFormat::kQa;
    qa.conversion = ConversionMeta{out.verdict.confidence, out.verdict.rationale};
    out.record = std::move(qa);
  }
  return out;
}

std::vector<ConversionResult> filter_by_confidence(
    const std::vector<ConversionResult>& results, double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw std::invalid_argument("confidence threshold must lie in [0, 1]");
  }
  std::vector<ConversionResult> kept;
  for (const auto& r : results) {
    if (r.verdict.convertible && r.verdict.confidence >= threshold) kept.push_back(r);
  }
  return kept;
}

}  // namespace listreward
