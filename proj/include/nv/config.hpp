#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nv/operators.hpp"
#include "nv/system.hpp"

namespace nv {

// key = value tree with explicit unit tags on every physical quantity,
// e.g.  Bz = "2 T"   Delta = "100 kHz_x2pi"   tilt = "1.5 deg"
enum class Dim { tesla, angular_frequency, time, angle, length, dimensionless };

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Config {
 public:
  static Config load(const std::string& path);
  static Config from_string(const std::string& text, const std::string& name);

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  long get_int(const std::string& key) const;
  long get_int(const std::string& key, long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  // physical quantity in SI/rad units; the unit tag must match dim
  double get_quantity(const std::string& key, Dim dim) const;
  double get_quantity(const std::string& key, Dim dim, double fallback) const;
  double get_unitless(const std::string& key) const;
  double get_unitless(const std::string& key, double fallback) const;
  Vector3 get_vec3(const std::string& key) const;

  const std::string& name() const { return name_; }
  std::string dir() const;
  std::vector<std::string> keys() const;

 private:
  struct Entry {
    std::string value;
    int line = 0;
  };
  const Entry& entry(const std::string& key) const;
  [[noreturn]] void fail(const std::string& key, const std::string& msg) const;

  std::string name_;
  std::map<std::string, Entry> entries_;
};

// unit-tagged scalar "  <number> <unit>"; returns rad/s, s, T, rad, nm
double parse_quantity(const std::string& text, Dim dim);

// register file: a `units` header line then one `nucleus` record per line,
// optionally `coupling j k value` lines
SpinRegister load_register(const std::string& path, int ms);

}  // namespace nv
