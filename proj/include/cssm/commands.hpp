#pragma once

// Command implementations behind the `cssm` executable. Each returns the
// process exit status so they can be exercised without spawning a process.

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "cssm/critval.hpp"
#include "cssm/cusum.hpp"
#include "cssm/errors.hpp"
#include "cssm/longrun.hpp"
#include "cssm/mc.hpp"
#include "cssm/models.hpp"
#include "cssm/random.hpp"
#include "cssm/time_series.hpp"

namespace cssm {

inline constexpr int kExitNoChange = 0;
inline constexpr int kExitChange = 1;
inline constexpr int kExitError = 2;

/// Malformed series file; `line()` is 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

inline std::optional<double> parse_double(std::string_view s) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) return std::nullopt;
  return v;
}

}  // namespace detail

/// One real number per line; blank lines and lines starting with '#' are
/// skipped.
inline std::vector<double> read_values(std::istream& in) {
  std::vector<double> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view s = detail::trim(line);
    if (s.empty() || s.front() == '#') continue;
    const auto v = detail::parse_double(s);
    if (!v) throw ParseError(lineno, "not a number: '" + std::string(s) + "'");
    if (!std::isfinite(*v)) throw ParseError(lineno, "value is not finite");
    out.push_back(*v);
  }
  return out;
}

inline TimeSeries read_series(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open input file '" + path + "'");
  std::vector<double> values = read_values(in);
  if (values.empty()) throw std::runtime_error("input file '" + path + "' has no values");
  return TimeSeries(std::move(values));
}

/// Full-precision text, one value per line.
inline void write_series(std::ostream& out, const TimeSeries& x) {
  char buf[40];
  for (double v : x) {
    std::snprintf(buf, sizeof buf, "%.17g\n", v);
    out << buf;
  }
}

struct DetectOptions {
  std::string input;
  std::size_t max_lag = 1;
  double alpha = 0.05;
  EstimatorConfig cfg;
  bool center = false;
  BridgeConfig bridge;
  /// Empty disables the critical value cache.
  std::string cache_path;
  /// Optional CSV report (detect) or path output (path); empty = none.
  std::string output;
};

namespace detail {

struct Prepared {
  TimeSeries x;
  double critical;
};

inline Prepared prepare(const DetectOptions& opt) {
  TimeSeries x = read_series(opt.input);
  if (opt.center) x = x.centered();
  opt.cfg.validate();
  const std::size_t minimum = minimum_sample_size(opt.max_lag, opt.cfg.beta);
  if (x.size() < minimum) throw InsufficientDataError(x.size(), minimum);
  std::optional<CriticalValueCache> cache;
  if (!opt.cache_path.empty()) cache.emplace(opt.cache_path);
  const double c = critical_value(opt.max_lag, opt.alpha, opt.bridge,
                                  cache ? &*cache : nullptr);
  return {std::move(x), c};
}

}  // namespace detail

/// Runs the test on a series file. Exit 0: no change, 1: change, 2: error.
inline int detect_command(const DetectOptions& opt, std::ostream& out,
                          std::ostream& err) {
  try {
    const detail::Prepared p = detail::prepare(opt);
    const TestResult r = cssm_test_at(p.x, opt.max_lag, opt.cfg, p.critical);
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "n = %zu\nL = %zu\nh_n = %zu\nstatistic = %.10g\n"
                  "critical_value = %.10g\ndecision = %s\nchange_index = %zu\n",
                  r.n, r.max_lag, r.truncation_lag, r.statistic,
                  r.critical_value,
                  r.reject ? "change detected" : "no change detected",
                  r.change_index);
    out << buf;
    if (!opt.output.empty()) {
      std::ofstream rep(opt.output);
      if (!rep) throw std::runtime_error("cannot write report '" + opt.output + "'");
      rep << "n,L,h_n,statistic,critical_value,reject,change_index\n";
      std::snprintf(buf, sizeof buf, "%zu,%zu,%zu,%.17g,%.17g,%d,%zu\n", r.n,
                    r.max_lag, r.truncation_lag, r.statistic, r.critical_value,
                    r.reject ? 1 : 0, r.change_index);
      rep << buf;
    }
    return r.reject ? kExitChange : kExitNoChange;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

/// Writes the CUSUM path as CSV `k,value,critical_value`, one row per
/// admissible k. Exit 0 on success, 2 on error.
inline int emit_path(const DetectOptions& opt, std::ostream& out,
                     std::ostream& err) {
  try {
    const detail::Prepared p = detail::prepare(opt);
    const CovMatrix c = estimate_longrun_cov(p.x, opt.max_lag, opt.cfg);
    const CusumPath path = cusum_path(p.x, c, opt.max_lag);
    std::ofstream file;
    if (!opt.output.empty()) {
      file.open(opt.output);
      if (!file) throw std::runtime_error("cannot write '" + opt.output + "'");
    }
    std::ostream& dst = opt.output.empty() ? out : file;
    dst << "k,value,critical_value\n";
    char buf[96];
    for (std::size_t k = path.k_min; k <= path.k_max; ++k) {
      std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", k, path.at(k), p.critical);
      dst << buf;
    }
    return kExitNoChange;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

/// Parses a comma-separated parameter list for `family`:
/// arma11 "phi,theta"; ma2 "theta1,theta2"; product2dep "mu_z,sigma_z";
/// garch11 "omega,alpha,beta".
inline ModelSpec parse_model(const std::string& family, const std::string& params,
                             double noise_sigma = 1.0) {
  std::vector<double> v;
  std::stringstream ss(params);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto d = detail::parse_double(detail::trim(item));
    if (!d) throw ConfigError("bad parameter '" + item + "'");
    v.push_back(*d);
  }
  const auto need = [&](std::size_t count) {
    if (v.size() != count) {
      throw ConfigError(family + " expects " + std::to_string(count) +
                        " parameters, got " + std::to_string(v.size()));
    }
  };
  ModelSpec spec;
  spec.noise_sigma = noise_sigma;
  if (family == "arma11") {
    need(2);
    spec.params = Arma11{v[0], v[1]};
  } else if (family == "ma2") {
    need(2);
    spec.params = Ma2{v[0], v[1]};
  } else if (family == "product2dep") {
    need(2);
    spec.params = Product2Dep{v[0], v[1]};
  } else if (family == "garch11") {
    need(3);
    spec.params = Garch11{v[0], v[1], v[2]};
  } else {
    throw ConfigError("unknown family '" + family +
                      "' (expected arma11, ma2, product2dep or garch11)");
  }
  spec.validate();
  return spec;
}

}  // namespace cssm
