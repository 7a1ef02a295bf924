#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "listreward/metric.h"
#include "listreward/reward.h"

namespace listreward {

using ojson = nlohmann::ordered_json;

// Absent optional fields are omitted.
ojson outcome_to_json(const RewardOutcome& outcome);
ojson report_to_json(const MetricReport& report);
MetricReport report_from_json(const ojson& obj);

// Fraction -> percentage rounded half-up to two decimals, e.g. 0.66666 -> "66.67".
std::string format_percent(double fraction);
std::string format_fixed2(double value);

// Aligned plain-text table with Acc, MRR, CP and VLL columns, plus Acc^LLM and
// MRR^LLM when any row carries judge metrics. Rows print in the given order.
using ReportRows = std::vector<std::pair<std::string, MetricReport>>;
std::string render_table(const ReportRows& rows);

// Run provenance written next to the outputs of every mutating command.
struct RunManifest {
  std::string command;
  ojson config = ojson::object();
  std::map<std::string, std::string> input_checksums;
  std::map<std::string, std::string> template_checksums;
  std::string started;
  std::string finished;
  std::string version = LISTREWARD_VERSION;
  std::string status = "OK";

  ojson to_json() const;
  void write(const std::filesystem::path& path) const;
};

}  // namespace listreward
