#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cssm/errors.hpp"
#include "cssm/parallel.hpp"
#include "cssm/random.hpp"

namespace cssm {

/// Discretization and Monte Carlo budget for the squared-bridge functional.
struct BridgeConfig {
  std::size_t grid_points = 2000;
  std::size_t replications = 100000;
  std::uint64_t seed = kDefaultSeed;

  void validate() const {
    if (grid_points < 100) throw ConfigError("grid_points must be >= 100");
    if (replications < 1000) throw ConfigError("replications must be >= 1000");
  }
};

/// One Brownian bridge on t_i = i/m, i = 0..m, built as W(t_i) - t_i W(1)
/// from a Gaussian random walk with step variance 1/m.
inline std::vector<double> brownian_bridge(Engine& rng, std::size_t m) {
  std::normal_distribution<double> step(0.0, 1.0 / std::sqrt(static_cast<double>(m)));
  std::vector<double> path(m + 1);
  path[0] = 0.0;
  for (std::size_t i = 1; i <= m; ++i) path[i] = path[i - 1] + step(rng);
  const double end = path[m];
  const double mm = static_cast<double>(m);
  for (std::size_t i = 0; i <= m; ++i) {
    path[i] -= (static_cast<double>(i) / mm) * end;
  }
  return path;
}

/// max over the grid of sum_{j=0}^{L} B_j(t)^2 for L+1 independent bridges.
inline double bridge_sup(Engine& rng, std::size_t max_lag, std::size_t m) {
  std::vector<double> acc(m + 1, 0.0);
  for (std::size_t j = 0; j <= max_lag; ++j) {
    const std::vector<double> b = brownian_bridge(rng, m);
    for (std::size_t i = 0; i <= m; ++i) acc[i] += b[i] * b[i];
  }
  return *std::max_element(acc.begin(), acc.end());
}

/// One supremum per replication; replication r draws from its own stream
/// so the output does not depend on `threads`.
inline std::vector<double> simulate_bridge_sup(std::size_t max_lag,
                                               const BridgeConfig& cfg,
                                               unsigned threads = 0) {
  cfg.validate();
  std::vector<double> sups(cfg.replications);
  parallel_for(cfg.replications, threads, [&](std::size_t r) {
    Engine rng = make_engine(cfg.seed, r);
    sups[r] = bridge_sup(rng, max_lag, cfg.grid_points);
  });
  return sups;
}

inline void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ConfigError("alpha must lie in (0, 1), got " + std::to_string(alpha));
  }
}

/// Order statistic at index ceil((1-alpha) R) (1-based) of the R samples.
inline double upper_quantile(std::vector<double> samples, double alpha) {
  check_alpha(alpha);
  if (samples.empty()) throw DomainError("quantile of empty sample");
  const auto r = static_cast<double>(samples.size());
  auto idx = static_cast<std::size_t>(std::ceil((1.0 - alpha) * r - 1e-9));
  idx = std::clamp<std::size_t>(idx, 1, samples.size());
  std::nth_element(samples.begin(), samples.begin() + static_cast<long>(idx - 1),
                   samples.end());
  return samples[idx - 1];
}

/// Critical values keyed by (L, alpha).
class CriticalTable {
 public:
  /// Entries shipped with the library.
  static CriticalTable builtin() {
    CriticalTable t;
    t.insert(1, 0.05, 2.408);
    return t;
  }

  void insert(std::size_t max_lag, double alpha, double c) {
    check_alpha(alpha);
    if (!(c > 0.0)) throw ConfigError("critical value must be positive");
    entries_[{max_lag, alpha_key(alpha)}] = c;
  }

  std::optional<double> lookup(std::size_t max_lag, double alpha) const {
    const auto it = entries_.find({max_lag, alpha_key(alpha)});
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  /// c decreases in alpha at fixed L and increases in L at fixed alpha,
  /// checked over every pair of entries for which the comparison applies.
  bool is_monotone() const {
    for (const auto& [a, ca] : entries_) {
      for (const auto& [b, cb] : entries_) {
        if (a.first == b.first && a.second < b.second && !(ca > cb)) return false;
        if (a.second == b.second && a.first < b.first && !(ca < cb)) return false;
      }
    }
    return true;
  }

  std::size_t size() const noexcept { return entries_.size(); }

 private:
  // Alphas are compared at 1e-9 resolution.
  static long long alpha_key(double alpha) {
    return std::llround(alpha * 1e9);
  }
  std::map<std::pair<std::size_t, long long>, double> entries_;
};

/// Append-only text cache of simulated critical values, one record per line:
/// `L alpha grid replications seed c_value`.
class CriticalValueCache {
 public:
  explicit CriticalValueCache(std::filesystem::path path)
      : path_(std::move(path)) {}

  const std::filesystem::path& path() const noexcept { return path_; }

  std::optional<double> lookup(std::size_t max_lag, double alpha,
                               const BridgeConfig& cfg) const {
    std::lock_guard<std::mutex> lock(io_mutex());
    std::ifstream in(path_);
    if (!in) return std::nullopt;
    std::optional<double> found;
    std::string line;
    while (std::getline(in, line)) {
      std::istringstream row(line);
      std::size_t l = 0, grid = 0, reps = 0;
      std::uint64_t seed = 0;
      double a = 0.0, c = 0.0;
      if (!(row >> l >> a >> grid >> reps >> seed >> c)) continue;
      if (l == max_lag && std::abs(a - alpha) < 1e-12 &&
          grid == cfg.grid_points && reps == cfg.replications &&
          seed == cfg.seed) {
        found = c;
      }
    }
    return found;
  }

  void append(std::size_t max_lag, double alpha, const BridgeConfig& cfg,
              double c) const {
    std::lock_guard<std::mutex> lock(io_mutex());
    std::ofstream out(path_, std::ios::app);
    if (!out) {
      throw std::runtime_error("cannot open critical value cache " +
                               path_.string());
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "%zu %.17g %zu %zu %llu %.17g\n", max_lag,
                  alpha, cfg.grid_points, cfg.replications,
                  static_cast<unsigned long long>(cfg.seed), c);
    out << buf;
  }

 private:
  static std::mutex& io_mutex() {
    static std::mutex m;
    return m;
  }
  std::filesystem::path path_;
};

/// (1 - alpha)-quantile of the simulated functional, ignoring the table.
inline double simulated_critical_value(std::size_t max_lag, double alpha,
                                       const BridgeConfig& cfg,
                                       unsigned threads = 0) {
  check_alpha(alpha);
  return upper_quantile(simulate_bridge_sup(max_lag, cfg, threads), alpha);
}

/// Critical value c_alpha(L): the built-in table when it has the entry,
/// otherwise the cache, otherwise a fresh simulation (then cached).
inline double critical_value(std::size_t max_lag, double alpha,
                             const std::optional<BridgeConfig>& cfg = std::nullopt,
                             const CriticalValueCache* cache = nullptr,
                             unsigned threads = 0) {
  check_alpha(alpha);
  if (auto c = CriticalTable::builtin().lookup(max_lag, alpha)) return *c;
  if (!cfg) {
    throw ConfigError("no tabulated critical value for L = " +
                      std::to_string(max_lag) + ", alpha = " +
                      std::to_string(alpha) + " and no simulation budget given");
  }
  if (cache) {
    if (auto c = cache->lookup(max_lag, alpha, *cfg)) return *c;
  }
  const double c = simulated_critical_value(max_lag, alpha, *cfg, threads);
  if (cache) cache->append(max_lag, alpha, *cfg, c);
  return c;
}

}  // namespace cssm
