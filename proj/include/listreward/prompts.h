#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "listreward/assets.h"
#include "listreward/records.h"

namespace listreward {

enum class PromptTemplateId { kMcq, kMcqCot, kQa, kQaCot, kList, kListCot };

inline constexpr PromptTemplateId kAllPromptTemplates[] = {
    PromptTemplateId::kMcq,  PromptTemplateId::kMcqCot,
    PromptTemplateId::kQa,   PromptTemplateId::kQaCot,
    PromptTemplateId::kList, PromptTemplateId::kListCot};

std::string_view to_string(PromptTemplateId id);  // "mcq_cot", ...
std::optional<PromptTemplateId> parse_prompt_template(std::string_view name);
std::string prompt_asset_name(PromptTemplateId id);  // "templates/mcq_cot"
AnswerFormat template_format(PromptTemplateId id);
bool is_cot(PromptTemplateId id);

inline constexpr const char* kListExampleAsset = "templates/list_example";

// "A. text" lines in option order.
std::string format_options(const QuestionRecord& record);

// Fills {{question}}, {{options}} and {{example}}. MCQ templates need an MCQ
// record; QA and list templates accept QA or list records. Throws
// IncompatibleFormat or TemplateMissing.
std::string render_prompt(PromptTemplateId id, const QuestionRecord& record,
                          const AssetStore& assets);

// Decoding settings used for evaluation runs.
struct DecodingConfig {
  double temperature = 0.0;
  double top_p = 1.0;
  int top_k = -1;
  int max_tokens = 8192;
};

}  // namespace listreward
