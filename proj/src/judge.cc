#include "listreward/judge.h"

#include <cctype>

#include "listreward/text.h"

namespace listreward {
namespace {

std::string lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

bool is_decoration(char c) {
  return c == '*' || c == '`' || c == '#' || c == '>' || c == '_' ||
         c == '[' || c == ']' || c == '"' || c == '\'';
}

std::string_view strip_decoration(std::string_view s) {
  s = trim(s);
  while (!s.empty() && is_decoration(s.front())) s = trim(s.substr(1));
  while (!s.empty() && (is_decoration(s.back()) || s.back() == '.')) {
    s = trim(s.substr(0, s.size() - 1));
  }
  return s;
}

// Value following the last line that opens with `marker`, case-insensitive.
std::optional<std::string> last_marker_value(std::string_view text,
                                             std::string_view marker) {
  const std::string want = lower_ascii(marker);
  std::optional<std::string> found;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t nl = text.find('\n', start);
    std::size_t end = nl == std::string_view::npos ? text.size() : nl;
    std::string_view line = text.substr(start, end - start);
    std::string_view head = trim(line);
    while (!head.empty() && is_decoration(head.front())) head = trim(head.substr(1));
    if (head.size() >= want.size() &&
        lower_ascii(head.substr(0, want.size())) == want) {
      found = std::string(strip_decoration(head.substr(want.size())));
    }
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  return found;
}

}  // namespace

std::string_view to_string(JudgeProtocol protocol) {
  switch (protocol) {
    case JudgeProtocol::kFullMrr: return "full_mrr";
    case JudgeProtocol::kSimpleMrr: return "simple_mrr";
    case JudgeProtocol::kQaAcc: return "qa_acc";
  }
  return "unknown";
}

std::string judge_template_name(JudgeProtocol protocol) {
  return "judge/" + std::string(to_string(protocol));
}

std::string format_items(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out.push_back('\n');
    out += std::to_string(i + 1);
    out += ". ";
    out += items[i];
  }
  return out;
}

std::string render_judge_prompt(const JudgeRequest& request,
                                const AssetStore& assets) {
  const bool ranked = request.protocol != JudgeProtocol::kQaAcc;
  if (ranked && request.items.empty()) {
    throw std::invalid_argument("MRR judge request needs at least one item");
  }
  const std::string& tmpl = assets.get(judge_template_name(request.protocol));
  std::string items = ranked ? format_items(request.items)
                             : (request.items.empty() ? "" : request.items[0]);
  return substitute(tmpl, {{"question", request.question},
                           {"gold", request.gold},
                           {"items", items}});
}

JudgeVerdict parse_judge_reply(std::string_view text, int n_items) {
  JudgeVerdict v;
  v.raw_reply = std::string(text);
  auto value = last_marker_value(text, kRankMarker);
  if (!value) return v;
  if (lower_ascii(*value) == "none") {
    v.parse_ok = true;
    return v;
  }
  if (value->empty() || value->size() > 9) return v;
  for (char c : *value) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return v;
  }
  int k = std::stoi(*value);
  if (k < 1 || k > n_items) return v;
  v.rank = k;
  v.equivalent = true;
  v.parse_ok = true;
  return v;
}

JudgeVerdict parse_equivalence_reply(std::string_view text) {
  JudgeVerdict v;
  v.raw_reply = std::string(text);
  auto value = last_marker_value(text, kEquivalentMarker);
  if (!value) return v;
  std::string answer = lower_ascii(*value);
  if (answer == "yes") {
    v.equivalent = true;
    v.rank = 1;
    v.parse_ok = true;
  } else if (answer == "no") {
    v.parse_ok = true;
  }
  return v;
}

JudgeVerdict run_judge(const JudgeRequest& request, LlmClient& client,
                       const AssetStore& assets) {
  const std::string prompt = render_judge_prompt(request, assets);
  const int n = static_cast<int>(request.items.size());
  auto parse = [&](std::string_view reply) {
    return request.protocol == JudgeProtocol::kQaAcc
               ? parse_equivalence_reply(reply)
               : parse_judge_reply(reply, n);
  };
  std::string reply = client.query(
      prompt, [&](std::string_view r) { return parse(r).parse_ok; });
  return parse(reply);
}

double judge_mrr(const JudgeRequest& request, LlmClient& client,
                 const AssetStore& assets) {
  if (request.protocol == JudgeProtocol::kQaAcc) {
    throw std::invalid_argument("judge_mrr needs an MRR protocol");
  }
  JudgeVerdict v = run_judge(request, client, assets);
  return v.rank ? 1.0 / *v.rank : 0.0;
}

int derived_llm_acc(const JudgeVerdict& verdict) {
  return verdict.rank ? 1 : 0;
}

}  // namespace listreward
