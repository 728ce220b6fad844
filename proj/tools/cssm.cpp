// cssm: change-point detection in the autocovariance structure of a series.
//
//   cssm simulate --family garch11 --params 0.5,0.1,0.2 --n 1000 --seed 7
//   cssm detect   --input series.txt [-L 1] [--alpha 0.05]
//   cssm path     --input series.txt --out path.csv
//   cssm critval  -L 2 --alpha 0.05 [--grid 2000] [--reps 100000]
//   cssm power    --table T1 [--reps 1000] --out results.csv

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "cssm/commands.hpp"

namespace {

void add_detect_flags(CLI::App* cmd, cssm::DetectOptions& opt) {
  cmd->add_option("--input,-i", opt.input, "Series file, one value per line")
      ->required();
  cmd->add_option("-L,--max-lag", opt.max_lag, "Maximum autocovariance lag");
  cmd->add_option("--alpha", opt.alpha, "Significance level");
  cmd->add_option("--beta", opt.cfg.beta, "Truncation exponent, h_n = n^beta");
  cmd->add_option("--eps-floor", opt.cfg.eps_floor,
                  "Eigenvalue floor, relative to trace/(L+1)");
  cmd->add_flag("--center", opt.center, "Subtract the sample mean first");
  cmd->add_option("--grid", opt.bridge.grid_points,
                  "Grid points when the critical value must be simulated");
  cmd->add_option("--reps", opt.bridge.replications,
                  "Replications when the critical value must be simulated");
  cmd->add_option("--seed", opt.bridge.seed, "Seed for critical value simulation");
  cmd->add_option("--cache", opt.cache_path, "Critical value cache file");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CUSUM test for changes in the autocovariance structure"};
  app.require_subcommand(1);

  // simulate
  std::string family;
  std::string params;
  std::string params_after;
  std::size_t n = 0;
  std::uint64_t sim_seed = cssm::kDefaultSeed;
  double sigma = 1.0;
  std::size_t burn_in = cssm::kDefaultBurnIn;
  std::size_t change_at = 0;
  std::string sim_out;
  auto* sim = app.add_subcommand("simulate", "Simulate a model path");
  sim->add_option("--family", family, "arma11 | ma2 | product2dep | garch11")
      ->required();
  sim->add_option("--params", params,
                  "arma11: phi,theta  ma2: theta1,theta2  "
                  "product2dep: mu_z,sigma_z  garch11: omega,alpha,beta")
      ->required();
  sim->add_option("--n", n, "Length")->required()->check(CLI::PositiveNumber);
  sim->add_option("--seed", sim_seed, "Random seed");
  sim->add_option("--sigma", sigma, "Innovation scale of the linear families");
  sim->add_option("--burn-in", burn_in, "Discarded warm-up values");
  auto* change_opt =
      sim->add_option("--change-at", change_at, "Last observation before the change");
  sim->add_option("--params-after", params_after, "Parameters after the change")
      ->needs(change_opt);
  change_opt->needs("--params-after");
  sim->add_option("--out,-o", sim_out, "Output file (default stdout)");

  // detect / path
  cssm::DetectOptions detect_opt;
  detect_opt.cache_path = ".cssm_critval_cache";
  auto* detect = app.add_subcommand("detect", "Test a series for a change");
  add_detect_flags(detect, detect_opt);
  detect->add_option("--report", detect_opt.output, "Also write a CSV report");

  cssm::DetectOptions path_opt;
  path_opt.cache_path = ".cssm_critval_cache";
  auto* path = app.add_subcommand("path", "Write the CUSUM path as CSV");
  add_detect_flags(path, path_opt);
  path->add_option("--out,-o", path_opt.output, "Output file (default stdout)");

  // critval
  std::size_t cv_lag = 1;
  double cv_alpha = 0.05;
  cssm::BridgeConfig cv_bridge;
  bool cv_simulate = false;
  std::string cv_cache = ".cssm_critval_cache";
  bool cv_no_cache = false;
  unsigned cv_threads = 0;
  auto* cv = app.add_subcommand("critval", "Critical value of the limit law");
  cv->add_option("-L,--max-lag", cv_lag, "Maximum lag")->required();
  cv->add_option("--alpha", cv_alpha, "Significance level")->required();
  cv->add_option("--grid", cv_bridge.grid_points, "Grid points on [0,1]");
  cv->add_option("--reps", cv_bridge.replications, "Monte Carlo replications");
  cv->add_option("--seed", cv_bridge.seed, "Random seed");
  cv->add_flag("--simulate", cv_simulate, "Simulate even if tabulated");
  cv->add_option("--cache", cv_cache, "Cache file");
  cv->add_flag("--no-cache", cv_no_cache, "Do not read or write the cache");
  cv->add_option("--threads", cv_threads, "Worker threads (0 = all cores)");

  // power
  std::string table = "T1";
  std::size_t pw_reps = 1000;
  std::uint64_t pw_seed = cssm::kDefaultSeed;
  std::string pw_out;
  unsigned pw_threads = 0;
  auto* power = app.add_subcommand("power", "Reproduce a power table");
  power->add_option("--table", table, "T1 | T2a | T2b | T3")->required();
  power->add_option("--reps", pw_reps, "Replications per scenario")
      ->check(CLI::PositiveNumber);
  power->add_option("--seed", pw_seed, "Base seed");
  power->add_option("--out,-o", pw_out, "CSV output file")->required();
  power->add_option("--threads", pw_threads, "Worker threads (0 = all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cssm::kExitError;
  }

  try {
    if (*sim) {
      const cssm::ModelSpec before = cssm::parse_model(family, params, sigma);
      const cssm::TimeSeries x =
          params_after.empty()
              ? cssm::simulate(before, n, sim_seed, burn_in)
              : cssm::simulate_with_change(
                    cssm::ChangeSpec{change_at, before,
                                     cssm::parse_model(family, params_after, sigma)},
                    n, sim_seed, burn_in);
      if (sim_out.empty()) {
        cssm::write_series(std::cout, x);
      } else {
        std::ofstream out(sim_out);
        if (!out) throw std::runtime_error("cannot write '" + sim_out + "'");
        cssm::write_series(out, x);
      }
      return 0;
    }
    if (*detect) return cssm::detect_command(detect_opt, std::cout, std::cerr);
    if (*path) return cssm::emit_path(path_opt, std::cout, std::cerr);
    if (*cv) {
      double c = 0.0;
      const char* source = "simulated";
      if (cv_simulate) {
        c = cssm::simulated_critical_value(cv_lag, cv_alpha, cv_bridge, cv_threads);
      } else if (auto t = cssm::CriticalTable::builtin().lookup(cv_lag, cv_alpha)) {
        c = *t;
        source = "table";
      } else {
        std::optional<cssm::CriticalValueCache> cache;
        if (!cv_no_cache) cache.emplace(cv_cache);
        c = cssm::critical_value(cv_lag, cv_alpha, cv_bridge,
                                 cache ? &*cache : nullptr, cv_threads);
      }
      std::printf("L = %zu alpha = %g c = %.6f (%s)\n", cv_lag, cv_alpha, c, source);
      return 0;
    }
    if (*power) {
      const cssm::TableId id = cssm::parse_table(table);
      const auto scenarios = cssm::table_scenarios(id, pw_reps, pw_seed);
      std::vector<cssm::PowerReport> reports;
      for (const auto& s : scenarios) {
        reports.push_back(cssm::run_scenario(s, pw_threads));
        std::printf("%-28s power = %.3f\n", s.id.c_str(), reports.back().power);
      }
      std::ofstream out(pw_out);
      if (!out) throw std::runtime_error("cannot write '" + pw_out + "'");
      cssm::write_power_csv(out, id, scenarios, reports);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cssm::kExitError;
  }
  return cssm::kExitError;
}
