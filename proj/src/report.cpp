#include "nv/report.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nv {

void write_report(const Report& rep, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write report: " + path);
  os.precision(12);
  os << "scenario " << rep.scenario << "\n";
  os << "target_id " << rep.target_id << "\n";
  os << "seed " << rep.seed << "\n";
  for (const auto& a : rep.artifacts) os << "artifact " << a << "\n";
  for (const auto& r : rep.rows)
    os << "row " << r.name << " = " << r.value << " tol " << r.tol << "\n";
}

Report read_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read report: " + path);
  Report rep;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream iss(line);
    std::string tag;
    iss >> tag;
    if (tag == "scenario")
      iss >> rep.scenario;
    else if (tag == "target_id")
      iss >> rep.target_id;
    else if (tag == "seed")
      iss >> rep.seed;
    else if (tag == "artifact") {
      std::string a;
      iss >> a;
      rep.artifacts.push_back(a);
    } else if (tag == "row") {
      // row <name with spaces> = <value> tol <tol>
      const auto eq = line.rfind(" = ");
      if (eq == std::string::npos)
        throw std::runtime_error("malformed report row: " + line);
      ReportRow row;
      row.name = line.substr(4, eq - 4);
      std::istringstream tail(line.substr(eq + 3));
      std::string toltag;
      if (!(tail >> row.value >> toltag >> row.tol) || toltag != "tol")
        throw std::runtime_error("malformed report row: " + line);
      rep.rows.push_back(row);
    } else {
      throw std::runtime_error("unknown report record: " + line);
    }
  }
  return rep;
}

DiffResult report_diff(const Report& fresh, const Report& golden) {
  if (fresh.scenario != golden.scenario || fresh.target_id != golden.target_id)
    throw std::invalid_argument("report_diff: scenario mismatch");
  DiffResult out;
  for (const auto& want : golden.rows) {
    DiffEntry e;
    e.name = want.name;
    e.want = want.value;
    e.tol = want.tol;
    e.missing = true;
    for (const auto& got : fresh.rows)
      if (got.name == want.name) {
        e.missing = false;
        e.got = got.value;
        e.pass = std::abs(e.got - e.want) <= e.tol;
        break;
      }
    if (e.missing) e.pass = false;
    if (!e.pass) out.pass = false;
    out.entries.push_back(e);
  }
  return out;
}

}  // namespace nv
