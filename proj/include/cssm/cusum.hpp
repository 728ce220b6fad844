#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cssm/autocov.hpp"
#include "cssm/critval.hpp"
#include "cssm/errors.hpp"
#include "cssm/longrun.hpp"
#include "cssm/time_series.hpp"

namespace cssm {

/// Squared norm of the normalized CUSUM vector at each k in [k_min, k_max].
struct CusumPath {
  std::vector<double> values;
  std::size_t k_min = 0;
  std::size_t k_max = 0;

  double at(std::size_t k) const { return values.at(k - k_min); }
};

struct TestResult {
  double statistic = 0.0;
  std::size_t change_index = 0;
  double critical_value = 0.0;
  bool reject = false;
  std::size_t max_lag = 0;
  std::size_t n = 0;
  std::size_t truncation_lag = 0;
};

/// Symmetric positive-definite S with S C S = I, via eigendecomposition.
inline Eigen::MatrixXd inv_sqrt(const CovMatrix& c) {
  const Eigen::MatrixXd& m = c.entries();
  if (!m.allFinite()) throw NumericError("inv_sqrt: non-finite entries");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  if (es.info() != Eigen::Success) {
    throw NumericError("inv_sqrt: eigendecomposition failed");
  }
  const Eigen::VectorXd& lambda = es.eigenvalues();
  if (!(lambda.minCoeff() > 0.0)) {
    throw NumericError("inv_sqrt: matrix is not positive definite");
  }
  const Eigen::MatrixXd& v = es.eigenvectors();
  return v * lambda.cwiseSqrt().cwiseInverse().asDiagonal() * v.transpose();
}

/// v_k' v_k with v_k = (k / sqrt(n)) C^{-1/2} (gamma_k(h) - gamma_n(h))_{h=0..L}
/// for k = L+1..n-1.
inline CusumPath cusum_path(const TimeSeries& x, const CovMatrix& c,
                            std::size_t max_lag) {
  if (c.max_lag() != max_lag) {
    throw DomainError("covariance matrix has dimension " +
                      std::to_string(c.dim()) + " but max lag is " +
                      std::to_string(max_lag));
  }
  const std::size_t n = x.size();
  if (n < max_lag + 2) {
    throw DomainError("CUSUM path needs n >= L + 2 = " +
                      std::to_string(max_lag + 2));
  }
  const Eigen::MatrixXd s = inv_sqrt(c);
  const std::vector<AutocovVector> prefixes = prefix_autocovs(x, max_lag);
  const std::vector<double>& full = prefixes.back().gamma;

  const auto dim = static_cast<Eigen::Index>(max_lag + 1);
  const double root_n = std::sqrt(static_cast<double>(n));
  Eigen::VectorXd d(dim);
  CusumPath path;
  path.k_min = max_lag + 1;
  path.k_max = n - 1;
  path.values.reserve(path.k_max - path.k_min + 1);
  // prefixes[j] holds the prefix of length max_lag + 1 + j.
  for (std::size_t k = path.k_min; k <= path.k_max; ++k) {
    const std::vector<double>& g = prefixes[k - path.k_min].gamma;
    for (Eigen::Index h = 0; h < dim; ++h) {
      d(h) = g[static_cast<std::size_t>(h)] - full[static_cast<std::size_t>(h)];
    }
    const Eigen::VectorXd v = (static_cast<double>(k) / root_n) * (s * d);
    path.values.push_back(v.squaredNorm());
  }
  return path;
}

namespace detail {

inline TestResult summarize(const CusumPath& path, double critical,
                            std::size_t max_lag, std::size_t n,
                            std::size_t trunc) {
  TestResult r;
  r.max_lag = max_lag;
  r.n = n;
  r.truncation_lag = trunc;
  r.critical_value = critical;
  r.change_index = path.k_min;
  r.statistic = path.values.front();
  for (std::size_t i = 1; i < path.values.size(); ++i) {
    if (path.values[i] > r.statistic) {
      r.statistic = path.values[i];
      r.change_index = path.k_min + i;
    }
  }
  r.reject = r.statistic >= critical;
  return r;
}

}  // namespace detail

/// CSSM test against a given critical value.
inline TestResult cssm_test_at(const TimeSeries& x, std::size_t max_lag,
                               const EstimatorConfig& cfg,
                               double critical_value) {
  const CovMatrix c = estimate_longrun_cov(x, max_lag, cfg);
  const CusumPath path = cusum_path(x, c, max_lag);
  return detail::summarize(path, critical_value, max_lag, x.size(),
                           truncation_lag(x.size(), cfg.beta));
}

/// CSSM test at level alpha. The critical value comes from the built-in
/// table, or from `bridge` (plus optional cache) when not tabulated.
inline TestResult cssm_test(const TimeSeries& x, std::size_t max_lag,
                            const EstimatorConfig& cfg, double alpha,
                            const std::optional<BridgeConfig>& bridge = std::nullopt,
                            const CriticalValueCache* cache = nullptr) {
  const double c = critical_value(max_lag, alpha, bridge, cache);
  return cssm_test_at(x, max_lag, cfg, c);
}

}  // namespace cssm
