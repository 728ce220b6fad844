#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "cssm/errors.hpp"
#include "cssm/random.hpp"
#include "cssm/time_series.hpp"

namespace cssm {

/// X_t - phi X_{t-1} = Z_t + theta Z_{t-1}
struct Arma11 {
  double phi = 0.0;
  double theta = 0.0;
};

/// X_t = Z_t + theta1 Z_{t-1} + theta2 Z_{t-2}
struct Ma2 {
  double theta1 = 0.0;
  double theta2 = 0.0;
};

/// X_t = Z_t Z_{t-1} Z_{t-2} with Z_t ~ N(mu_z, sigma_z^2)
struct Product2Dep {
  double mu_z = 0.0;
  double sigma_z = 1.0;
};

/// X_t = h_t Z_t, h_t^2 = omega + alpha X_{t-1}^2 + beta h_{t-1}^2
struct Garch11 {
  double omega = 0.5;
  double alpha = 0.1;
  double beta = 0.2;
};

using ModelParams = std::variant<Arma11, Ma2, Product2Dep, Garch11>;

enum class Family { arma11, ma2, product2dep, garch11 };

inline const char* family_name(Family f) {
  switch (f) {
    case Family::arma11: return "arma11";
    case Family::ma2: return "ma2";
    case Family::product2dep: return "product2dep";
    case Family::garch11: return "garch11";
  }
  return "?";
}

/// A model family with its parameters. `noise_sigma` scales the Gaussian
/// innovations of the linear families (ARMA11, MA2); PRODUCT2DEP carries its
/// own innovation law and GARCH11 uses standard normal innovations.
struct ModelSpec {
  ModelParams params;
  double noise_sigma = 1.0;

  Family family() const { return static_cast<Family>(params.index()); }

  void validate() const {
    if (!(noise_sigma > 0.0)) throw ConfigError("noise_sigma must be positive");
    std::visit(
        [](const auto& p) {
          using P = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<P, Arma11>) {
            if (!(std::abs(p.phi) < 1.0)) {
              throw ConfigError("ARMA(1,1) requires |phi| < 1");
            }
          } else if constexpr (std::is_same_v<P, Product2Dep>) {
            if (!(p.sigma_z > 0.0)) throw ConfigError("sigma_z must be positive");
          } else if constexpr (std::is_same_v<P, Garch11>) {
            if (!(p.omega > 0.0) || p.alpha < 0.0 || p.beta < 0.0 ||
                !(p.alpha + p.beta < 1.0)) {
              throw ConfigError(
                  "GARCH(1,1) requires omega > 0, alpha, beta >= 0 and "
                  "alpha + beta < 1");
            }
          }
        },
        params);
  }
};

/// Parameters switch from `before` to `after` after observation
/// `change_index` (1-based: observations 1..k* follow `before`).
struct ChangeSpec {
  std::size_t change_index = 0;
  ModelSpec before;
  ModelSpec after;
};

inline constexpr std::size_t kDefaultBurnIn = 500;

/// Recursion state shared by all families. Parameters are supplied per step,
/// so a parameter change carries lagged values across the break.
class ModelSimulator {
 public:
  ModelSimulator(const ModelSpec& initial, std::uint64_t seed)
      : rng_(make_engine(seed)), family_(initial.family()) {
    initial.validate();
    if (const auto* p = std::get_if<Product2Dep>(&initial.params)) {
      z1_ = p->mu_z + p->sigma_z * normal_(rng_);
      z2_ = p->mu_z + p->sigma_z * normal_(rng_);
    }
  }

  double step(const ModelSpec& spec) {
    if (spec.family() != family_) {
      throw ConfigError("model family cannot change mid-simulation");
    }
    const double e = normal_(rng_);
    return std::visit([&](const auto& p) { return advance(p, spec, e); },
                      spec.params);
  }

 private:
  double advance(const Arma11& p, const ModelSpec& s, double e) {
    const double z = s.noise_sigma * e;
    const double x = p.phi * x1_ + z + p.theta * z1_;
    x1_ = x;
    z1_ = z;
    return x;
  }

  double advance(const Ma2& p, const ModelSpec& s, double e) {
    const double z = s.noise_sigma * e;
    const double x = z + p.theta1 * z1_ + p.theta2 * z2_;
    z2_ = z1_;
    z1_ = z;
    return x;
  }

  double advance(const Product2Dep& p, const ModelSpec&, double e) {
    const double z = p.mu_z + p.sigma_z * e;
    const double x = z * z1_ * z2_;
    z2_ = z1_;
    z1_ = z;
    return x;
  }

  double advance(const Garch11& p, const ModelSpec&, double e) {
    const double h2 = started_ ? p.omega + p.alpha * x1_ * x1_ + p.beta * h2_
                               : p.omega / (1.0 - p.alpha - p.beta);
    started_ = true;
    const double x = std::sqrt(h2) * e;
    h2_ = h2;
    x1_ = x;
    return x;
  }

  Engine rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  Family family_;
  double x1_ = 0.0;
  double z1_ = 0.0;
  double z2_ = 0.0;
  double h2_ = 0.0;
  bool started_ = false;
};

/// n observations of `spec` after discarding `burn_in` warm-up values.
inline TimeSeries simulate(const ModelSpec& spec, std::size_t n,
                           std::uint64_t seed,
                           std::size_t burn_in = kDefaultBurnIn) {
  if (n < 1) throw DomainError("simulate: n must be >= 1");
  ModelSimulator sim(spec, seed);
  for (std::size_t i = 0; i < burn_in; ++i) sim.step(spec);
  std::vector<double> out(n);
  for (double& v : out) v = sim.step(spec);
  return TimeSeries(std::move(out));
}

/// One continuing process whose parameters change after observation
/// cs.change_index. Burn-in runs under cs.before.
inline TimeSeries simulate_with_change(const ChangeSpec& cs, std::size_t n,
                                       std::uint64_t seed,
                                       std::size_t burn_in = kDefaultBurnIn) {
  if (n < 2) throw DomainError("simulate_with_change: n must be >= 2");
  if (cs.change_index < 1 || cs.change_index >= n) {
    throw DomainError("change index must satisfy 1 <= k* < n");
  }
  if (cs.before.family() != cs.after.family()) {
    throw ConfigError("pre- and post-change models must be the same family");
  }
  cs.after.validate();
  ModelSimulator sim(cs.before, seed);
  for (std::size_t i = 0; i < burn_in; ++i) sim.step(cs.before);
  std::vector<double> out(n);
  for (std::size_t t = 0; t < n; ++t) {
    out[t] = sim.step(t < cs.change_index ? cs.before : cs.after);
  }
  return TimeSeries(std::move(out));
}

}  // namespace cssm
