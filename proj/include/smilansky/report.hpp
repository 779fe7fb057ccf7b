#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "smilansky/config.hpp"

namespace smilansky {

inline constexpr std::string_view kReportSchema = "smilansky-report/1";
inline constexpr std::string_view kFixtureVersion = "fixtures/1";

struct Table {
  std::string name;                       // file stem
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
};

// Two-column x y data.
struct PlotData {
  std::string name;
  std::string x_label;
  std::string y_label;
  std::vector<std::pair<double, double>> points;
};

struct ReportBundle {
  std::string command;
  std::vector<Table> tables;
  std::vector<PlotData> plots;
  std::string text;                       // human-readable block
  nlohmann::json results = nlohmann::json::object();
  bool inequality_failed = false;
};

std::string to_csv(const Table& table);
std::string to_plot_text(const PlotData& plot);

nlohmann::json config_to_json(const RunConfig& config);
// Accepts the "config" object of a summary; string values go through the
// same setters as the text format.
RunConfig config_from_json(const nlohmann::json& json);

nlohmann::json summary_json(const ReportBundle& bundle, const RunConfig& config);

// <out>/<table>.csv, <out>/<plot>.dat, <out>/summary.json, <out>/report.txt.
// Returns the paths written. IoError names the failing path.
std::vector<std::filesystem::path> write_report(const ReportBundle& bundle, const RunConfig& config,
                                                const std::filesystem::path& out_dir);

}  // namespace smilansky
