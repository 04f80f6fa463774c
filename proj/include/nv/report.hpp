#pragma once

#include <string>
#include <vector>

namespace nv {

struct ReportRow {
  std::string name;
  double value = 0;
  double tol = 0;  // comparison tolerance used by diff
};

struct Report {
  std::string scenario;
  std::string target_id;
  uint64_t seed = 0;
  std::vector<ReportRow> rows;
  std::vector<std::string> artifacts;  // data files written alongside

  void add(const std::string& name, double value, double tol) {
    rows.push_back({name, value, tol});
  }
};

void write_report(const Report& rep, const std::string& path);
Report read_report(const std::string& path);

struct DiffEntry {
  std::string name;
  double got = 0, want = 0, tol = 0;
  bool pass = false;
  bool missing = false;
};

struct DiffResult {
  std::vector<DiffEntry> entries;
  bool pass = true;
};

// per-row comparison against the golden report's tolerances
DiffResult report_diff(const Report& fresh, const Report& golden);

}  // namespace nv
