#include "nv/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "nv/constants.hpp"

namespace nv {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

struct UnitDef {
  const char* tag;
  Dim dim;
  double factor;
};

const UnitDef unit_table[] = {
    {"T", Dim::tesla, 1.0},
    {"mT", Dim::tesla, 1e-3},
    {"Hz_x2pi", Dim::angular_frequency, twopi},
    {"kHz_x2pi", Dim::angular_frequency, twopi * 1e3},
    {"MHz_x2pi", Dim::angular_frequency, twopi * 1e6},
    {"GHz_x2pi", Dim::angular_frequency, twopi * 1e9},
    {"rad_per_s", Dim::angular_frequency, 1.0},
    {"s", Dim::time, 1.0},
    {"ms", Dim::time, 1e-3},
    {"us", Dim::time, 1e-6},
    {"ns", Dim::time, 1e-9},
    {"rad", Dim::angle, 1.0},
    {"deg", Dim::angle, pi / 180.0},
    {"pi", Dim::angle, pi},
    {"nm", Dim::length, 1.0},
};

}  // namespace

double parse_quantity(const std::string& text, Dim dim) {
  std::istringstream iss(trim(text));
  double value;
  std::string unit;
  if (!(iss >> value))
    throw ConfigError("expected '<number> <unit>', got '" + text + "'");
  if (!(iss >> unit)) {
    if (dim == Dim::dimensionless) return value;
    throw ConfigError("missing unit tag on '" + text + "'");
  }
  std::string rest;
  if (iss >> rest) throw ConfigError("trailing content in quantity '" + text + "'");
  if (dim == Dim::dimensionless)
    throw ConfigError("unexpected unit on dimensionless value '" + text + "'");
  for (const auto& u : unit_table)
    if (unit == u.tag) {
      if (u.dim != dim)
        throw ConfigError("unit '" + unit + "' has the wrong dimension in '" +
                          text + "'");
      return value * u.factor;
    }
  throw ConfigError("unknown unit '" + unit + "'");
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_string(ss.str(), path);
}

Config Config::from_string(const std::string& text, const std::string& name) {
  Config cfg;
  cfg.name_ = name;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(name + ":" + std::to_string(lineno) +
                        ": expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError(name + ":" + std::to_string(lineno) +
                        ": empty key or value");
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
      value = value.substr(1, value.size() - 2);
    if (cfg.entries_.count(key))
      throw ConfigError(name + ":" + std::to_string(lineno) +
                        ": duplicate key '" + key + "'");
    cfg.entries_[key] = {value, lineno};
  }
  return cfg;
}

bool Config::has(const std::string& key) const { return entries_.count(key) > 0; }

const Config::Entry& Config::entry(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end())
    throw ConfigError(name_ + ": missing required key '" + key + "'");
  return it->second;
}

void Config::fail(const std::string& key, const std::string& msg) const {
  const auto it = entries_.find(key);
  const int line = it == entries_.end() ? 0 : it->second.line;
  throw ConfigError(name_ + ":" + std::to_string(line) + ": key '" + key +
                    "': " + msg);
}

std::string Config::get_string(const std::string& key) const {
  return entry(key).value;
}

std::string Config::get_string(const std::string& key,
                               const std::string& fallback) const {
  return has(key) ? entry(key).value : fallback;
}

long Config::get_int(const std::string& key) const {
  try {
    size_t pos = 0;
    const long v = std::stol(entry(key).value, &pos);
    if (pos != entry(key).value.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const ConfigError&) {
    throw;
  } catch (...) {
    fail(key, "expected an integer");
  }
}

long Config::get_int(const std::string& key, long fallback) const {
  return has(key) ? get_int(key) : fallback;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string& v = entry(key).value;
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  fail(key, "expected a boolean");
}

double Config::get_quantity(const std::string& key, Dim dim) const {
  try {
    return parse_quantity(entry(key).value, dim);
  } catch (const ConfigError& e) {
    if (std::string(e.what()).find(name_) == 0) throw;
    fail(key, e.what());
  }
}

double Config::get_quantity(const std::string& key, Dim dim, double fallback) const {
  return has(key) ? get_quantity(key, dim) : fallback;
}

double Config::get_unitless(const std::string& key) const {
  return get_quantity(key, Dim::dimensionless);
}

double Config::get_unitless(const std::string& key, double fallback) const {
  return has(key) ? get_unitless(key) : fallback;
}

Vector3 Config::get_vec3(const std::string& key) const {
  std::string v = entry(key).value;
  for (auto& c : v)
    if (c == ',') c = ' ';
  std::istringstream iss(v);
  double x, y, z;
  if (!(iss >> x >> y >> z)) fail(key, "expected three comma-separated numbers");
  std::string rest;
  if (iss >> rest) fail(key, "trailing content in vector");
  return {x, y, z};
}

std::string Config::dir() const {
  const auto pos = name_.find_last_of('/');
  return pos == std::string::npos ? std::string(".") : name_.substr(0, pos);
}

std::vector<std::string> Config::keys() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : entries_) out.push_back(k);
  return out;
}

SpinRegister load_register(const std::string& path, int ms) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open register file: " + path);
  SpinRegister reg;
  reg.ms = ms;
  std::map<std::string, double> unit_factor;  // field -> multiplier
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& msg) -> void {
    throw ConfigError(path + ":" + std::to_string(lineno) + ": " + msg);
  };
  auto factor_for = [&](const std::string& field) {
    auto it = unit_factor.find(field);
    if (it == unit_factor.end())
      fail("units header does not declare '" + field + "'");
    return it->second;
  };
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    std::istringstream iss(line);
    std::string tag;
    iss >> tag;
    if (tag == "units") {
      std::string tok;
      while (iss >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) fail("units entries look like field=unit");
        const std::string field = tok.substr(0, eq);
        const std::string unit = tok.substr(eq + 1);
        const Dim dim = field == "position" ? Dim::length
                        : field == "gyro"   ? Dim::angular_frequency
                                            : Dim::angular_frequency;
        unit_factor[field] = parse_quantity("1 " + unit, dim);
      }
    } else if (tag == "nucleus") {
      Nucleus nuc;
      std::string tok;
      bool has_hyperfine = false;
      while (iss >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) fail("nucleus fields look like field=x,y,z");
        const std::string field = tok.substr(0, eq);
        std::string val = tok.substr(eq + 1);
        for (auto& c : val)
          if (c == ',') c = ' ';
        std::istringstream vs(val);
        if (field == "hyperfine" || field == "position") {
          double x, y, z;
          if (!(vs >> x >> y >> z)) fail("bad triple in '" + tok + "'");
          const double f = factor_for(field);
          if (field == "hyperfine") {
            nuc.hyperfine = f * Vector3(x, y, z);
            has_hyperfine = true;
          } else {
            nuc.position = f * Vector3(x, y, z);
          }
        } else if (field == "gyro") {
          double g;
          if (!(vs >> g)) fail("bad gyro value");
          nuc.gyro = g * factor_for("gyro");
        } else {
          fail("unknown nucleus field '" + field + "'");
        }
      }
      if (!has_hyperfine && nuc.position)
        nuc.hyperfine = hyperfine_vector(*nuc.position, gamma_e, nuc.gyro);
      else if (!has_hyperfine)
        fail("nucleus needs a hyperfine vector or a position");
      reg.nuclei.push_back(nuc);
    } else if (tag == "coupling") {
      int j, k;
      double g;
      if (!(iss >> j >> k >> g)) fail("coupling lines look like: coupling j k value");
      reg.couplings.push_back({j, k, g * factor_for("coupling")});
    } else {
      fail("unknown record '" + tag + "'");
    }
  }
  if (!reg.couplings.empty())
    for (const auto& c : reg.couplings)
      if (c.j < 0 || c.k < 0 || c.j >= reg.size() || c.k >= reg.size() || c.j == c.k)
        throw ConfigError(path + ": coupling indices out of range");
  reg.validate();
  return reg;
}

}  // namespace nv
