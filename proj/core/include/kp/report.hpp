#pragma once

#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace kp {

// 17 significant digits: round-trip exact for doubles and byte-stable.
std::string fmt17(double v);

struct CsvTable {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> cells) { rows.push_back(std::move(cells)); }
};

struct Verdict {
  std::string name;
  bool pass = false;
  std::string note;
};

// Machine-readable command result. Identical config + tool version produce
// byte-identical files; wall-clock timing therefore stays out of the report
// document and is printed on the console summary only.
struct Report {
  std::string command;
  std::map<std::string, std::string> config_echo;
  std::vector<CsvTable> tables;
  std::vector<Verdict> verdicts;
  std::string version;

  bool pass() const {
    for (const auto& v : verdicts)
      if (!v.pass) return false;
    return true;
  }
};

// Writes <prefix><table>.csv per table plus <prefix>report.json; returns the
// list of paths written.
std::vector<std::string> write_report(const Report& report,
                                      const std::string& out_dir,
                                      const std::string& prefix);

// Human-readable summary (verdicts, table shapes, timing supplied by caller).
void print_summary(const Report& report, double elapsed_seconds,
                   std::ostream& os);

}  // namespace kp
