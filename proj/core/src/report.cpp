#include "kp/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "kp/errors.hpp"

namespace kp {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> write_report(const Report& report,
                                      const std::string& out_dir,
                                      const std::string& prefix) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw ConfigError("report: cannot create output dir " + out_dir);

  std::vector<std::string> written;
  for (const auto& table : report.tables) {
    const fs::path path = fs::path(out_dir) / (prefix + table.name + ".csv");
    std::ofstream out(path);
    if (!out) throw ConfigError("report: cannot write " + path.string());
    for (std::size_t i = 0; i < table.header.size(); ++i)
      out << (i ? "," : "") << table.header[i];
    out << "\n";
    for (const auto& row : table.rows) {
      for (std::size_t i = 0; i < row.size(); ++i)
        out << (i ? "," : "") << row[i];
      out << "\n";
    }
    written.push_back(path.string());
  }

  nlohmann::ordered_json doc;
  doc["command"] = report.command;
  doc["version"] = report.version;
  nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
  for (const auto& [k, v] : report.config_echo) cfg[k] = v;
  doc["config"] = std::move(cfg);
  nlohmann::ordered_json verdicts = nlohmann::ordered_json::array();
  for (const auto& v : report.verdicts) {
    verdicts.push_back(nlohmann::ordered_json{
        {"name", v.name}, {"pass", v.pass}, {"note", v.note}});
  }
  doc["verdicts"] = std::move(verdicts);
  nlohmann::ordered_json tables = nlohmann::ordered_json::object();
  for (const auto& t : report.tables)
    tables[t.name] = nlohmann::ordered_json{{"header", t.header},
                                            {"rows", t.rows}};
  doc["tables"] = std::move(tables);

  const fs::path jpath = fs::path(out_dir) / (prefix + "report.json");
  std::ofstream jout(jpath);
  if (!jout) throw ConfigError("report: cannot write " + jpath.string());
  jout << doc.dump(2) << "\n";
  written.push_back(jpath.string());
  return written;
}

void print_summary(const Report& report, double elapsed_seconds,
                   std::ostream& os) {
  os << "kp " << report.command << " (v" << report.version << ")\n";
  for (const auto& t : report.tables)
    os << "  table " << t.name << ": " << t.rows.size() << " rows\n";
  for (const auto& v : report.verdicts) {
    os << "  [" << (v.pass ? "PASS" : "FAIL") << "] " << v.name;
    if (!v.note.empty()) os << " - " << v.note;
    os << "\n";
  }
  os << "  elapsed: " << fmt17(elapsed_seconds) << " s\n";
}

}  // namespace kp
