#include "listreward/parse.h"

#include <cctype>

#include "listreward/text.h"

namespace listreward {
namespace {

constexpr std::string_view kBoxedOpen = "\\boxed{";

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

// Non-ASCII bytes count as word characters so that accented words are never
// split into a standalone letter.
bool is_word_byte(char c) {
  auto u = static_cast<unsigned char>(c);
  return u >= 0x80 || u == '_' || std::isalnum(u) != 0;
}

std::size_t count_occurrences(std::string_view text, std::string_view needle) {
  std::size_t n = 0;
  for (std::size_t p = text.find(needle); p != std::string_view::npos;
       p = text.find(needle, p + needle.size())) {
    ++n;
  }
  return n;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t nl = text.find('\n', start);
    std::size_t end = nl == std::string_view::npos ? text.size() : nl;
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  return lines;
}

std::string_view ltrim(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size() && is_space(s[i])) ++i;
  return s.substr(i);
}

std::optional<std::vector<std::string>> parse_enumerated(
    std::string_view text, const ListGrammar& grammar) {
  std::vector<std::string> items;
  long expected = 1;
  bool any = false;
  for (std::string_view raw : split_lines(text)) {
    std::string_view line = ltrim(raw);
    std::size_t i = 0;
    while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) {
      ++i;
    }
    if (i == 0 || i > 9 || i >= line.size()) continue;
    if (grammar.enumeration_delimiters.find(line[i]) == std::string::npos) {
      continue;
    }
    if (i + 1 < line.size() && !is_space(line[i + 1])) continue;
    long k = std::stol(std::string(line.substr(0, i)));
    if (grammar.require_consecutive && k != expected) return std::nullopt;
    ++expected;
    any = true;
    std::string_view content = trim(line.substr(i + 1));
    if (!content.empty()) items.emplace_back(content);
  }
  if (!any || items.empty()) return std::nullopt;
  return items;
}

std::optional<std::vector<std::string>> parse_bullets(
    std::string_view text, const ListGrammar& grammar) {
  std::vector<std::string> items;
  bool any = false;
  for (std::string_view raw : split_lines(text)) {
    std::string_view line = ltrim(raw);
    if (line.empty()) continue;
    if (grammar.bullet_markers.find(line[0]) == std::string::npos) continue;
    if (line.size() > 1 && !is_space(line[1])) continue;
    any = true;
    std::string_view content = trim(line.substr(1));
    if (!content.empty()) items.emplace_back(content);
  }
  if (!any || items.empty()) return std::nullopt;
  return items;
}

std::optional<std::vector<std::string>> parse_lines(std::string_view text,
                                                    const ListGrammar& grammar) {
  if (grammar.enumerated) {
    if (auto items = parse_enumerated(text, grammar)) return items;
  }
  if (grammar.bullets) {
    if (auto items = parse_bullets(text, grammar)) return items;
  }
  return std::nullopt;
}

std::vector<std::string> split_on(std::string_view text,
                                  std::string_view separators) {
  std::vector<std::string> items;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || separators.find(text[i]) != std::string_view::npos) {
      std::string_view piece = trim(text.substr(start, i - start));
      if (!piece.empty()) items.emplace_back(piece);
      start = i + 1;
    }
  }
  return items;
}

std::string_view unwrap_latex(std::string_view s) {
  // \text{B} -> B, repeatedly.
  while (s.size() > 2 && s[0] == '\\' && s.back() == '}') {
    std::size_t i = 1;
    while (i < s.size() && std::isalpha(static_cast<unsigned char>(s[i]))) ++i;
    if (i == 1 || i >= s.size() || s[i] != '{') break;
    s = trim(s.substr(i + 1, s.size() - i - 2));
  }
  return s;
}

bool is_strippable(char c) {
  return is_space(c) || std::ispunct(static_cast<unsigned char>(c)) != 0;
}

}  // namespace

ThinkStructure extract_think_structure(std::string_view text) {
  ThinkStructure out;
  out.body = std::string(text);
  if (count_occurrences(text, kThinkOpen) != 1 ||
      count_occurrences(text, kThinkClose) != 1) {
    return out;
  }
  std::size_t open = text.find(kThinkOpen);
  std::size_t close = text.find(kThinkClose);
  if (close < open) return out;
  for (std::size_t i = 0; i < open; ++i) {
    if (!is_space(text[i])) return out;
  }
  std::size_t think_begin = open + kThinkOpen.size();
  out.well_formed = true;
  out.think = std::string(text.substr(think_begin, close - think_begin));
  out.body = std::string(text.substr(close + kThinkClose.size()));
  return out;
}

std::string_view answer_region(std::string_view text) {
  ThinkStructure s = extract_think_structure(text);
  if (s.well_formed) {
    return text.substr(text.size() - s.body.size());
  }
  std::size_t close = text.rfind(kThinkClose);
  if (close == std::string_view::npos) return text;
  return text.substr(close + kThinkClose.size());
}

std::optional<std::string> extract_boxed(std::string_view body) {
  std::optional<std::string> last;
  std::size_t pos = 0;
  while (true) {
    std::size_t p = body.find(kBoxedOpen, pos);
    if (p == std::string_view::npos) break;
    std::size_t start = p + kBoxedOpen.size();
    int depth = 1;
    std::size_t i = start;
    for (; i < body.size(); ++i) {
      if (body[i] == '{') {
        ++depth;
      } else if (body[i] == '}' && --depth == 0) {
        break;
      }
    }
    if (depth == 0) {
      last = std::string(body.substr(start, i - start));
      pos = i + 1;
    } else {
      pos = start;
    }
  }
  return last;
}

std::optional<char> extract_choice(std::string_view body,
                                   std::string_view allowed_labels) {
  auto allowed = [&](char c) {
    return allowed_labels.find(c) != std::string_view::npos;
  };

  if (auto boxed = extract_boxed(body)) {
    std::string_view s = unwrap_latex(trim(*boxed));
    std::size_t b = 0, e = s.size();
    while (b < e && is_strippable(s[b])) ++b;
    while (e > b && is_strippable(s[e - 1])) --e;
    if (e - b == 1) {
      char c = static_cast<char>(std::toupper(static_cast<unsigned char>(s[b])));
      if (allowed(c)) return c;
    }
  }

  std::size_t i = 0;
  while (i < body.size() &&
         (is_space(body[i]) || body[i] == '*' || body[i] == '(' ||
          body[i] == '[')) {
    ++i;
  }
  if (i < body.size() && allowed(body[i]) &&
      (i + 1 == body.size() || !is_word_byte(body[i + 1]))) {
    return body[i];
  }

  for (std::size_t j = 0; j < body.size(); ++j) {
    if (!allowed(body[j])) continue;
    bool left = j == 0 || !is_word_byte(body[j - 1]);
    bool right = j + 1 == body.size() || !is_word_byte(body[j + 1]);
    if (left && right) return body[j];
  }
  return std::nullopt;
}

std::vector<std::string> parse_ranked_list(std::string_view body,
                                           const ListGrammar& grammar) {
  if (auto items = parse_lines(body, grammar)) return *items;
  if (grammar.boxed) {
    if (auto payload = extract_boxed(body)) {
      if (auto items = parse_lines(*payload, grammar)) return *items;
      return split_on(*payload, grammar.boxed_separators);
    }
  }
  std::string_view whole = trim(body);
  if (whole.empty()) return {};
  return {std::string(whole)};
}

std::optional<AnswerPayload> extract_payload(std::string_view response_text,
                                             AnswerFormat format,
                                             std::string_view allowed_labels,
                                             const ListGrammar& grammar) {
  std::string_view region = answer_region(response_text);
  switch (format) {
    case AnswerFormat::kMcq:
      if (auto c = extract_choice(region, allowed_labels)) return Choice{*c};
      return std::nullopt;
    case AnswerFormat::kQa:
      if (auto boxed = extract_boxed(region)) {
        return Short{std::string(trim(*boxed))};
      }
      return Short{std::string(trim(region))};
    case AnswerFormat::kList:
      return RankedList{parse_ranked_list(region, grammar)};
  }
  return std::nullopt;
}

}  // namespace listreward
