#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cssm/errors.hpp"
#include "cssm/time_series.hpp"

namespace cssm {

/// Sample autocovariances at lags 0..max_lag of the prefix x_1..x_{n_used}.
struct AutocovVector {
  std::vector<double> gamma;
  std::size_t n_used = 0;
  std::size_t max_lag = 0;
};

namespace detail {

inline void check_lag(const TimeSeries& x, std::size_t h) {
  if (h >= x.size()) {
    throw DomainError("lag " + std::to_string(h) + " out of range [0, " +
                      std::to_string(x.size() - 1) + "]");
  }
}

}  // namespace detail

/// (1/n) * sum_{i=1}^{n-h} x_i x_{i+h}. Divisor is n, no centering.
inline double sample_autocov(const TimeSeries& x, std::size_t h) {
  detail::check_lag(x, h);
  const std::size_t n = x.size();
  double sum = 0.0;
  for (std::size_t i = 0; i + h < n; ++i) sum += x[i] * x[i + h];
  return sum / static_cast<double>(n);
}

/// Autocovariance used inside the long-run estimator. Products running past
/// the end of the sample are dropped, so this coincides with sample_autocov.
inline double circular_autocov(const TimeSeries& x, std::size_t h) {
  return sample_autocov(x, h);
}

/// Autocovariance vectors of every prefix x_1..x_k, k = max_lag+1..n.
///
/// Running lag-product sums are updated once per new observation, so the
/// whole sequence costs O(n * max_lag).
inline std::vector<AutocovVector> prefix_autocovs(const TimeSeries& x,
                                                  std::size_t max_lag) {
  const std::size_t n = x.size();
  if (max_lag >= n) {
    throw DomainError("max lag " + std::to_string(max_lag) +
                      " requires more than " + std::to_string(n) +
                      " observations");
  }
  std::vector<double> sums(max_lag + 1, 0.0);
  std::vector<AutocovVector> out;
  out.reserve(n - max_lag);
  for (std::size_t k = 1; k <= n; ++k) {
    const double newest = x[k - 1];
    for (std::size_t h = 0; h <= max_lag && h < k; ++h) {
      sums[h] += x[k - 1 - h] * newest;
    }
    if (k < max_lag + 1) continue;
    AutocovVector v;
    v.n_used = k;
    v.max_lag = max_lag;
    v.gamma.resize(max_lag + 1);
    for (std::size_t h = 0; h <= max_lag; ++h) {
      v.gamma[h] = sums[h] / static_cast<double>(k);
    }
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace cssm
