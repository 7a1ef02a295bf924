#include "listreward/prompts.h"

namespace listreward {

std::string_view to_string(PromptTemplateId id) {
  switch (id) {
    case PromptTemplateId::kMcq: return "mcq";
    case PromptTemplateId::kMcqCot: return "mcq_cot";
    case PromptTemplateId::kQa: return "qa";
    case PromptTemplateId::kQaCot: return "qa_cot";
    case PromptTemplateId::kList: return "list";
    case PromptTemplateId::kListCot: return "list_cot";
  }
  return "unknown";
}

std::optional<PromptTemplateId> parse_prompt_template(std::string_view name) {
  for (PromptTemplateId id : kAllPromptTemplates) {
    if (to_string(id) == name) return id;
  }
  return std::nullopt;
}

std::string prompt_asset_name(PromptTemplateId id) {
  return "templates/" + std::string(to_string(id));
}

AnswerFormat template_format(PromptTemplateId id) {
  switch (id) {
    case PromptTemplateId::kMcq:
    case PromptTemplateId::kMcqCot:
      return AnswerFormat::kMcq;
    case PromptTemplateId::kQa:
    case PromptTemplateId::kQaCot:
      return AnswerFormat::kQa;
    case PromptTemplateId::kList:
    case PromptTemplateId::kListCot:
      return AnswerFormat::kList;
  }
  return AnswerFormat::kQa;
}

bool is_cot(PromptTemplateId id) {
  return id == PromptTemplateId::kMcqCot || id == PromptTemplateId::kQaCot ||
         id == PromptTemplateId::kListCot;
}

std::string format_options(const QuestionRecord& record) {
  std::string out;
  for (const auto& [label, text] : record.options) {
    if (!out.empty()) out.push_back('\n');
    out.push_back(label);
    out += ". ";
    out += text;
  }
  return out;
}

std::string render_prompt(PromptTemplateId id, const QuestionRecord& record,
                          const AssetStore& assets) {
  const bool mcq_template = template_format(id) == AnswerFormat::kMcq;
  const bool mcq_record = record.format == AnswerFormat::kMcq;
  if (mcq_template != mcq_record || (mcq_template && record.options.empty())) {
    throw IncompatibleFormat("template " + std::string(to_string(id)) +
                             " cannot render " +
                             std::string(to_string(record.format)) + " record '" +
                             record.record_id + "'");
  }
  std::vector<std::pair<std::string, std::string>> values = {
      {"question", record.question}, {"options", format_options(record)}};
  if (template_format(id) == AnswerFormat::kList) {
    std::string example = assets.get(kListExampleAsset);
    while (!example.empty() && example.back() == '\n') example.pop_back();
    values.emplace_back("example", std::move(example));
  }
  return substitute(assets.get(prompt_asset_name(id)), values);
}

}  // namespace listreward
