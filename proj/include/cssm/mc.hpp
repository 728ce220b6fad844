#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <type_traits>
#include <variant>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cssm/critval.hpp"
#include "cssm/cusum.hpp"
#include "cssm/errors.hpp"
#include "cssm/models.hpp"
#include "cssm/parallel.hpp"
#include "cssm/random.hpp"

namespace cssm {

struct Scenario {
  std::string id;
  ChangeSpec change;
  std::size_t n = 500;
  std::size_t max_lag = 1;
  double alpha = 0.05;
  std::size_t replications = 1000;
  std::uint64_t seed = kDefaultSeed;
  EstimatorConfig cfg;
  std::size_t burn_in = kDefaultBurnIn;
  /// Used only when (max_lag, alpha) has no tabulated critical value.
  std::optional<BridgeConfig> bridge;
};

struct PowerReport {
  std::string id;
  std::size_t rejections = 0;
  std::size_t replications = 0;
  /// Replications that raised a numeric error; excluded from `power`.
  std::size_t failures = 0;
  double power = 0.0;
  /// Mean change_index over rejecting replications (NaN when none reject).
  double mean_change_index = 0.0;
  double critical_value = 0.0;
  double wall_time_ms = 0.0;
  /// Per-replication outcomes, indexed by replication.
  std::vector<TestResult> results;
};

/// Seed of replication r under base seed `base`.
constexpr std::uint64_t replication_seed(std::uint64_t base,
                                         std::uint64_t r) noexcept {
  return stream_seed(base, r);
}

/// A scenario without a change: the same model on both sides of k*.
inline ChangeSpec no_change(const ModelSpec& spec, std::size_t change_index) {
  return ChangeSpec{change_index, spec, spec};
}

/// Runs every replication of `s` and tallies rejections. Replication r uses
/// replication_seed(s.seed, r), so the report is independent of `threads`.
inline PowerReport run_scenario(const Scenario& s, unsigned threads = 0) {
  if (s.replications < 1) throw ConfigError("replications must be >= 1");
  s.cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  const double crit = critical_value(s.max_lag, s.alpha, s.bridge, nullptr, threads);

  std::vector<std::optional<TestResult>> outcomes(s.replications);
  parallel_for(s.replications, threads, [&](std::size_t r) {
    try {
      const TimeSeries x =
          simulate_with_change(s.change, s.n, replication_seed(s.seed, r), s.burn_in);
      outcomes[r] = cssm_test_at(x, s.max_lag, s.cfg, crit);
    } catch (const NumericError&) {
      outcomes[r].reset();
    }
  });

  PowerReport rep;
  rep.id = s.id;
  rep.replications = s.replications;
  rep.critical_value = crit;
  rep.results.reserve(s.replications);
  double index_sum = 0.0;
  for (const auto& o : outcomes) {
    if (!o) {
      ++rep.failures;
      continue;
    }
    rep.results.push_back(*o);
    if (o->reject) {
      ++rep.rejections;
      index_sum += static_cast<double>(o->change_index);
    }
  }
  const std::size_t ok = s.replications - rep.failures;
  rep.power = ok == 0 ? 0.0 : static_cast<double>(rep.rejections) / static_cast<double>(ok);
  rep.mean_change_index = rep.rejections == 0
                              ? std::numeric_limits<double>::quiet_NaN()
                              : index_sum / static_cast<double>(rep.rejections);
  rep.wall_time_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - start)
                         .count();
  return rep;
}

enum class TableId { T1, T2a, T2b, T3 };

inline const char* table_name(TableId t) {
  switch (t) {
    case TableId::T1: return "T1";
    case TableId::T2a: return "T2a";
    case TableId::T2b: return "T2b";
    case TableId::T3: return "T3";
  }
  return "?";
}

inline TableId parse_table(const std::string& s) {
  if (s == "T1") return TableId::T1;
  if (s == "T2a") return TableId::T2a;
  if (s == "T2b") return TableId::T2b;
  if (s == "T3") return TableId::T3;
  throw ConfigError("unknown table '" + s + "' (expected T1, T2a, T2b or T3)");
}

namespace detail {

inline std::string fmt_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

inline Scenario make_scenario(std::string id, const ModelSpec& before,
                              const ModelSpec& after, std::size_t n,
                              std::size_t reps, std::uint64_t seed) {
  Scenario s;
  s.id = std::move(id);
  s.change = ChangeSpec{n / 2, before, after};
  s.n = n;
  s.replications = reps;
  s.seed = seed;
  return s;
}

}  // namespace detail

/// Scenario grid of one of the published power tables. All scenarios use
/// L = 1, alpha = 0.05, beta = 0.3 and a change at the midpoint.
inline std::vector<Scenario> table_scenarios(TableId table,
                                             std::size_t replications = 1000,
                                             std::uint64_t seed = kDefaultSeed) {
  using detail::fmt_num;
  std::vector<Scenario> out;
  switch (table) {
    case TableId::T1: {
      const ModelSpec before{Arma11{0.2, 0.1}};
      for (double theta : {0.1, 0.3, 0.5, 0.7}) {
        for (double phi : {0.2, 0.4, 0.5, 0.6}) {
          out.push_back(detail::make_scenario(
              "theta1=" + fmt_num(theta) + " phi1=" + fmt_num(phi), before,
              ModelSpec{Arma11{phi, theta}}, 500, replications, seed));
        }
      }
      break;
    }
    case TableId::T2a: {
      // n is not given for this table; the T1 layout (250 + 250) is reused.
      const ModelSpec before{Product2Dep{0.0, 1.0}};
      for (double sigma : {0.8, 0.6, 0.4, 0.2}) {
        out.push_back(detail::make_scenario("sigma=" + fmt_num(sigma), before,
                                            ModelSpec{Product2Dep{0.0, sigma}},
                                            500, replications, seed));
      }
      break;
    }
    case TableId::T2b: {
      const ModelSpec before{Product2Dep{0.0, 1.0}};
      for (double mu : {0.0, 0.5, 1.0, 1.5}) {
        out.push_back(detail::make_scenario("mu=" + fmt_num(mu), before,
                                            ModelSpec{Product2Dep{mu, 1.0}},
                                            500, replications, seed));
      }
      break;
    }
    case TableId::T3: {
      const ModelSpec before{Garch11{0.5, 0.1, 0.2}};
      const Garch11 alternatives[] = {{0.8, 0.1, 0.2}, {0.8, 0.1, 0.5}, {0.8, 0.4, 0.2}};
      for (std::size_t n : {500u, 800u, 1000u}) {
        out.push_back(detail::make_scenario("no change n=" + std::to_string(n),
                                            before, before, n, replications, seed));
        for (const Garch11& g : alternatives) {
          out.push_back(detail::make_scenario(
              "(" + fmt_num(g.omega) + "," + fmt_num(g.alpha) + "," +
                  fmt_num(g.beta) + ") n=" + std::to_string(n),
              before, ModelSpec{g}, n, replications, seed));
        }
      }
      break;
    }
  }
  return out;
}

inline std::vector<PowerReport> run_table(TableId table,
                                          std::size_t replications = 1000,
                                          std::uint64_t seed = kDefaultSeed,
                                          unsigned threads = 0) {
  std::vector<PowerReport> reports;
  for (const Scenario& s : table_scenarios(table, replications, seed)) {
    reports.push_back(run_scenario(s, threads));
  }
  return reports;
}

/// Textual parameters of a model, e.g. "phi=0.2;theta=0.1".
inline std::string describe_params(const ModelSpec& spec) {
  using detail::fmt_num;
  return std::visit(
      [](const auto& p) -> std::string {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, Arma11>) {
          return "phi=" + fmt_num(p.phi) + ";theta=" + fmt_num(p.theta);
        } else if constexpr (std::is_same_v<P, Ma2>) {
          return "theta1=" + fmt_num(p.theta1) + ";theta2=" + fmt_num(p.theta2);
        } else if constexpr (std::is_same_v<P, Product2Dep>) {
          return "mu_z=" + fmt_num(p.mu_z) + ";sigma_z=" + fmt_num(p.sigma_z);
        } else {
          return "omega=" + fmt_num(p.omega) + ";alpha=" + fmt_num(p.alpha) +
                 ";beta=" + fmt_num(p.beta);
        }
      },
      spec.params);
}

/// CSV report, one row per scenario.
inline void write_power_csv(std::ostream& out, TableId table,
                            const std::vector<Scenario>& scenarios,
                            const std::vector<PowerReport>& reports) {
  if (table == TableId::T2a || table == TableId::T2b) {
    out << "# sample size not published for this table; using n=500 with the "
           "change after observation 250\n";
  }
  out << "table,scenario,family,params_before,params_after,n,change_at,L,alpha,"
         "critical_value,rejections,power,mean_change_index,replications,"
         "failures,wall_time_ms\n";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const Scenario& s = scenarios.at(i);
    const PowerReport& r = reports[i];
    char tail[256];
    std::snprintf(tail, sizeof tail, "%zu,%zu,%zu,%g,%.6g,%zu,%.4f,%.2f,%zu,%zu,%.1f",
                  s.n, s.change.change_index, s.max_lag, s.alpha,
                  r.critical_value, r.rejections, r.power, r.mean_change_index,
                  r.replications, r.failures, r.wall_time_ms);
    out << table_name(table) << ",\"" << s.id << "\","
        << family_name(s.change.before.family()) << ","
        << describe_params(s.change.before) << ","
        << describe_params(s.change.after) << "," << tail << "\n";
  }
}

}  // namespace cssm
