#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace listreward {

enum class AnswerFormat { kMcq, kQa, kList };

std::string_view to_string(AnswerFormat format);
std::optional<AnswerFormat> parse_answer_format(std::string_view name);

// Raised when a reward kind, template, or operation is applied to a record of
// the wrong answer format.
class IncompatibleFormat : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace listreward
