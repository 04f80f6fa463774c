#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "nv/config.hpp"
#include "nv/report.hpp"

namespace nv {

struct RunOptions {
  std::string outdir = ".";
  std::optional<uint64_t> seed;
  std::optional<double> dt_max;
  int threads = 1;
};

// executes the scenario named in the config; writes data files and the
// report into outdir; returns the report
Report run_scenario(const Config& cfg, const RunOptions& opts);

// load-and-check without propagation; throws ConfigError on problems
void validate_scenario(const Config& cfg);

}  // namespace nv
