#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "listreward/report.h"

namespace listreward {

ojson outcome_to_json(const RewardOutcome& o) {
  ojson j;
  j["correctness"] = o.correctness;
  if (o.format) j["format"] = *o.format;
  j["total"] = o.total;
  if (o.rank) j["rank"] = *o.rank;
  if (o.list_length) j["list_length"] = *o.list_length;
  if (o.penalty) j["penalty"] = *o.penalty;
  return j;
}

ojson report_to_json(const MetricReport& r) {
  ojson j;
  j["format"] = std::string(to_string(r.format));
  j["n"] = r.n;
  j["acc"] = r.acc;
  auto put = [&](const char* key, const std::optional<double>& v) {
    if (v) j[key] = *v;
  };
  put("mrr", r.mrr);
  put("acc_llm", r.acc_llm);
  put("mrr_llm", r.mrr_llm);
  put("cp", r.cp);
  put("ll", r.ll);
  put("vll", r.vll);
  put("resp_len_mean", r.resp_len_mean);
  put("resp_len_std", r.resp_len_std);
  return j;
}

MetricReport report_from_json(const ojson& j) {
  MetricReport r;
  auto format = parse_answer_format(j.at("format").get<std::string>());
  if (!format) throw std::invalid_argument("report has an unknown format");
  r.format = *format;
  r.n = j.at("n").get<std::size_t>();
  r.acc = j.at("acc").get<double>();
  auto get = [&](const char* key) -> std::optional<double> {
    if (auto it = j.find(key); it != j.end()) return it->get<double>();
    return std::nullopt;
  };
  r.mrr = get("mrr");
  r.acc_llm = get("acc_llm");
  r.mrr_llm = get("mrr_llm");
  r.cp = get("cp");
  r.ll = get("ll");
  r.vll = get("vll");
  r.resp_len_mean = get("resp_len_mean");
  r.resp_len_std = get("resp_len_std");
  return r;
}

std::string format_fixed2(double value) {
  // Half-up at the second decimal; the epsilon absorbs binary representation
  // error of values such as 0.125.
  double rounded = std::floor(value * 100.0 + 0.5 + 1e-9) / 100.0;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", rounded);
  return buf;
}

std::string format_percent(double fraction) {
  return format_fixed2(fraction * 100.0);
}

std::string render_table(const ReportRows& rows) {
  bool judged = false;
  for (const auto& [name, r] : rows) judged = judged || r.acc_llm || r.mrr_llm;

  std::vector<std::string> header = {"benchmark", "format", "n", "Acc", "MRR"};
  if (judged) {
    header.push_back("Acc^LLM");
    header.push_back("MRR^LLM");
  }
  header.push_back("CP");
  header.push_back("VLL");

  auto pct = [](const std::optional<double>& v) {
    return v ? format_percent(*v) : std::string("-");
  };
  auto fix = [](const std::optional<double>& v) {
    return v ? format_fixed2(*v) : std::string("-");
  };

  std::vector<std::vector<std::string>> cells;
  for (const auto& [name, r] : rows) {
    std::vector<std::string> row = {name, std::string(to_string(r.format)),
                                    std::to_string(r.n), format_percent(r.acc),
                                    pct(r.mrr)};
    if (judged) {
      row.push_back(pct(r.acc_llm));
      row.push_back(pct(r.mrr_llm));
    }
    row.push_back(fix(r.cp));
    row.push_back(fix(r.vll));
    cells.push_back(std::move(row));
  }

  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    width[c] = header[c].size();
    for (const auto& row : cells) width[c] = std::max(width[c], row[c].size());
  }
  std::ostringstream out;
  auto emit = [&](const std::vector<std::string>& row) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) out << "  ";
      std::size_t pad = width[c] - row[c].size();
      // Text columns left-aligned, numbers right-aligned.
      if (c < 2) {
        out << row[c] << std::string(c + 1 == row.size() ? 0 : pad, ' ');
      } else {
        out << std::string(pad, ' ') << row[c];
      }
    }
    out << '\n';
  };
  emit(header);
  for (const auto& row : cells) emit(row);
  return out.str();
}

ojson RunManifest::to_json() const {
  ojson j;
  j["command"] = command;
  j["version"] = version;
  j["status"] = status;
  j["config"] = config;
  ojson inputs = ojson::object();
  for (const auto& [path, digest] : input_checksums) inputs[path] = digest;
  j["input_checksums"] = std::move(inputs);
  ojson templates = ojson::object();
  for (const auto& [name, digest] : template_checksums) templates[name] = digest;
  j["template_checksums"] = std::move(templates);
  j["started"] = started;
  j["finished"] = finished;
  return j;
}

void RunManifest::write(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write manifest " + path.string());
  out << to_json().dump(2) << '\n';
}

}  // namespace listreward
