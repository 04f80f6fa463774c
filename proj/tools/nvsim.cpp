#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>

#include "nv/report.hpp"
#include "nv/scenario.hpp"

// exit codes: 0 pass, 1 physics-assertion failure, 2 config error
int main(int argc, char** argv) {
  CLI::App app{"NV-center selective-gate simulator"};
  app.require_subcommand(1);

  std::string config_path, out_dir, fresh_path, golden_path;
  if (const char* env = std::getenv("NVSIM_OUT")) out_dir = env;
  if (out_dir.empty()) out_dir = ".";
  unsigned long long seed = 0;
  bool seed_set = false;
  double dt_max = 0;
  bool dt_set = false;
  int threads = 1;

  auto* run = app.add_subcommand("run", "run a scenario config");
  run->add_option("config", config_path, "scenario config file")->required();
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--seed", seed, "override the config seed")
      ->each([&](const std::string&) { seed_set = true; });
  run->add_option("--dt-max", dt_max, "cap the integrator step (seconds)")
      ->each([&](const std::string&) { dt_set = true; });
  run->add_option("--threads", threads, "worker thread cap");

  auto* validate = app.add_subcommand("validate", "validate a config without running");
  validate->add_option("config", config_path, "scenario config file")->required();

  auto* diff = app.add_subcommand("diff", "compare a report against a golden report");
  diff->add_option("report", fresh_path, "fresh report")->required();
  diff->add_option("golden", golden_path, "golden report with tolerances")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      const nv::Config cfg = nv::Config::load(config_path);
      nv::RunOptions opts;
      opts.outdir = out_dir;
      opts.threads = threads;
      if (seed_set) opts.seed = seed;
      if (dt_set) opts.dt_max = dt_max;
      const nv::Report rep = nv::run_scenario(cfg, opts);
      std::cout << "scenario " << rep.scenario << " target " << rep.target_id
                << ": " << rep.rows.size() << " quantities, "
                << rep.artifacts.size() << " data files -> " << out_dir << "\n";
      for (const auto& row : rep.rows)
        std::cout << "  " << row.name << " = " << row.value << "\n";
      return 0;
    }
    if (validate->parsed()) {
      nv::validate_scenario(nv::Config::load(config_path));
      std::cout << config_path << ": ok\n";
      return 0;
    }
    if (diff->parsed()) {
      const nv::Report fresh = nv::read_report(fresh_path);
      const nv::Report golden = nv::read_report(golden_path);
      const nv::DiffResult res = nv::report_diff(fresh, golden);
      for (const auto& e : res.entries) {
        std::cout << (e.pass ? "pass" : "FAIL") << "  " << e.name << ": ";
        if (e.missing)
          std::cout << "missing (want " << e.want << ")\n";
        else
          std::cout << e.got << " vs " << e.want << " (tol " << e.tol << ")\n";
      }
      std::cout << (res.pass ? "diff: pass" : "diff: fail") << "\n";
      return res.pass ? 0 : 1;
    }
  } catch (const nv::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
