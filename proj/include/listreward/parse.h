#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "listreward/types.h"

namespace listreward {

struct RawResponse {
  std::string text;
  std::optional<std::int64_t> token_count;
};

struct ThinkStructure {
  bool well_formed = false;
  std::optional<std::string> think;
  // Text after </think> when well formed, otherwise the whole input.
  std::string body;
};

inline constexpr std::string_view kThinkOpen = "<think>";
inline constexpr std::string_view kThinkClose = "</think>";

// Well formed iff the text holds exactly one <think> and one </think>, in that
// order, and nothing but whitespace precedes <think>. Total.
ThinkStructure extract_think_structure(std::string_view text);

// The part of a response answers are read from. For a well-formed response
// this is the body; for a malformed one it is whatever follows the last
// </think>, or the whole text when no close tag exists. Reasoning is never
// part of the answer region.
std::string_view answer_region(std::string_view text);

// Content of the last balanced \boxed{...} that is not nested inside another
// balanced occurrence.
std::optional<std::string> extract_boxed(std::string_view body);

// Resolution order: boxed content that is a lone allowed letter; an allowed
// uppercase letter opening the answer region and followed by a
// non-alphanumeric boundary; the first standalone allowed uppercase letter.
// Returned labels are uppercase. `allowed_labels` holds uppercase letters.
std::optional<char> extract_choice(std::string_view body,
                                   std::string_view allowed_labels);

// Which line shapes count as list items. The defaults read `1.`/`1)`
// enumerations, `-`/`*` bullets, and `;`/newline separated boxed payloads.
struct ListGrammar {
  bool enumerated = true;
  std::string enumeration_delimiters = ".)";
  // Enumerations must start at 1 and increase by one.
  bool require_consecutive = true;
  bool bullets = true;
  std::string bullet_markers = "-*";
  bool boxed = true;
  std::string boxed_separators = ";\n";
};

// Items in response order, trimmed, empties dropped, duplicates kept.
std::vector<std::string> parse_ranked_list(std::string_view body,
                                           const ListGrammar& grammar = {});

struct Choice {
  char label;
  bool operator==(const Choice&) const = default;
};
struct Short {
  std::string text;
  bool operator==(const Short&) const = default;
};
struct RankedList {
  std::vector<std::string> items;
  bool operator==(const RankedList&) const = default;
};
using AnswerPayload = std::variant<Choice, Short, RankedList>;

// Payload for one answer format; absent only for an MCQ response without a
// resolvable choice.
std::optional<AnswerPayload> extract_payload(std::string_view response_text,
                                             AnswerFormat format,
                                             std::string_view allowed_labels,
                                             const ListGrammar& grammar = {});

}  // namespace listreward
