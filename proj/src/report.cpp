#include "smilansky/report.hpp"

#include <fstream>

#include "smilansky/error.hpp"
#include "smilansky/format.hpp"

namespace smilansky {
namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace

void Table::add_row(std::vector<std::string> row) {
  if (row.size() != header.size()) {
    throw ParameterError("table " + name + ": row has " + std::to_string(row.size()) + " fields, header has " +
                         std::to_string(header.size()));
  }
  rows.push_back(std::move(row));
}

std::string to_csv(const Table& table) {
  std::string out;
  const auto line = [&](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i > 0) out += ',';
      out += csv_field(fields[i]);
    }
    out += '\n';
  };
  line(table.header);
  for (const auto& r : table.rows) line(r);
  return out;
}

std::string to_plot_text(const PlotData& plot) {
  std::string out = "# " + plot.x_label + " " + plot.y_label + "\n";
  for (const auto& [x, y] : plot.points) out += format_double(x) + " " + format_double(y) + "\n";
  return out;
}

nlohmann::json config_to_json(const RunConfig& config) {
  nlohmann::json j = nlohmann::json::object();
  j["schema"] = std::string(kConfigSchema);
  for (const auto& [k, v] : config.to_key_values()) j[k] = v;
  return j;
}

RunConfig config_from_json(const nlohmann::json& json) {
  if (!json.is_object()) throw ConfigError("config JSON must be an object");
  std::string text;
  for (const auto& [k, v] : json.items()) {
    if (!v.is_string()) throw ConfigError("config JSON value for '" + k + "' must be a string");
    text += k + " = " + v.get<std::string>() + "\n";
  }
  return parse_config(text);
}

nlohmann::json summary_json(const ReportBundle& bundle, const RunConfig& config) {
  nlohmann::json j;
  j["schema"] = std::string(kReportSchema);
  j["command"] = bundle.command;
  j["config_hash"] = config.hash_hex();
  j["fixture_version"] = std::string(kFixtureVersion);
  j["config"] = config_to_json(config);
  j["inequality_failed"] = bundle.inequality_failed;
  j["results"] = bundle.results;
  nlohmann::json files = nlohmann::json::array();
  for (const auto& t : bundle.tables) files.push_back(t.name + ".csv");
  for (const auto& p : bundle.plots) files.push_back(p.name + ".dat");
  j["files"] = files;
  return j;
}

std::vector<std::filesystem::path> write_report(const ReportBundle& bundle, const RunConfig& config,
                                                const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + out_dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> written;
  for (const auto& t : bundle.tables) {
    written.push_back(out_dir / (t.name + ".csv"));
    write_file(written.back(), to_csv(t));
  }
  for (const auto& p : bundle.plots) {
    written.push_back(out_dir / (p.name + ".dat"));
    write_file(written.back(), to_plot_text(p));
  }
  written.push_back(out_dir / "summary.json");
  write_file(written.back(), summary_json(bundle, config).dump(2) + "\n");
  written.push_back(out_dir / "report.txt");
  write_file(written.back(), bundle.text);
  return written;
}

}  // namespace smilansky
