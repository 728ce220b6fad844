#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cssm/autocov.hpp"
#include "cssm/errors.hpp"
#include "cssm/time_series.hpp"

namespace cssm {

/// Long-run covariance matrix of the sample autocovariances at lags 0..L.
/// Row/column i corresponds to lag i.
class CovMatrix {
 public:
  explicit CovMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
    if (entries_.rows() == 0 || entries_.rows() != entries_.cols()) {
      throw DomainError("covariance matrix must be square and non-empty");
    }
    if (!entries_.allFinite()) {
      throw NumericError("covariance matrix has non-finite entries");
    }
    for (Eigen::Index i = 0; i < entries_.rows(); ++i) {
      for (Eigen::Index j = i + 1; j < entries_.cols(); ++j) {
        if (entries_(i, j) != entries_(j, i)) {
          throw DomainError("covariance matrix must be exactly symmetric");
        }
      }
    }
  }

  std::size_t max_lag() const noexcept {
    return static_cast<std::size_t>(entries_.rows()) - 1;
  }
  std::size_t dim() const noexcept {
    return static_cast<std::size_t>(entries_.rows());
  }
  const Eigen::MatrixXd& entries() const noexcept { return entries_; }
  double operator()(std::size_t h, std::size_t k) const {
    return entries_(static_cast<Eigen::Index>(h), static_cast<Eigen::Index>(k));
  }

  double min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(entries_,
                                                      Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
  }

 private:
  Eigen::MatrixXd entries_;
};

/// Tuning of the truncated long-run covariance estimator.
struct EstimatorConfig {
  /// Truncation lag is floor(n^beta); must lie in (0, 1/2).
  double beta = 0.3;
  /// Eigenvalue floor. When `relative_floor` is set the floor applied is
  /// eps_floor * trace(raw)/(L+1), falling back to eps_floor itself if that
  /// scale is not positive.
  double eps_floor = 1e-8;
  bool relative_floor = true;

  void validate() const {
    if (!(beta > 0.0 && beta < 0.5)) {
      throw ConfigError("beta must lie in (0, 0.5), got " +
                        std::to_string(beta));
    }
    if (!(eps_floor > 0.0) || !std::isfinite(eps_floor)) {
      throw ConfigError("eps_floor must be positive, got " +
                        std::to_string(eps_floor));
    }
  }
};

/// floor(n^beta) clamped to [1, n-1].
inline std::size_t truncation_lag(std::size_t n, double beta) {
  if (!(beta > 0.0 && beta < 0.5)) {
    throw ConfigError("beta must lie in (0, 0.5), got " + std::to_string(beta));
  }
  if (n < 2) throw DomainError("truncation lag needs n >= 2");
  // Nudge so that exact integer powers are not lost to rounding in pow.
  const double raw = std::floor(std::pow(static_cast<double>(n), beta) + 1e-9);
  const auto lag = static_cast<std::size_t>(std::max(raw, 1.0));
  return std::min(lag, n - 1);
}

/// Smallest n for which every product in the estimator has at least one
/// retained term, i.e. n - truncation_lag(n) - max_lag >= 1.
inline std::size_t minimum_sample_size(std::size_t max_lag, double beta) {
  for (std::size_t n = max_lag + 2;; ++n) {
    if (n >= truncation_lag(n, beta) + max_lag + 1) return n;
  }
}

namespace detail {

// Inner sums of the displacement-l term. The products are grouped as
// (x_i x_{i+h})(x_{i+l} x_{i+l+k}) and (x_{i+l} x_{i+l+h})(x_i x_{i+k}) so that
// swapping h and k reproduces the same two numbers in swapped order.
inline double sigma_bar_impl(std::span<const double> x, std::size_t h,
                             std::size_t k, std::size_t l, double gamma_h,
                             double gamma_k) {
  const std::size_t n = x.size();
  const std::size_t reach = l + std::max(h, k);
  if (reach >= n) {
    throw DomainError("displacement " + std::to_string(l) + " with lags (" +
                      std::to_string(h) + ", " + std::to_string(k) +
                      ") leaves no products inside a sample of size " +
                      std::to_string(n));
  }
  const std::size_t count = n - reach;
  const double nn = static_cast<double>(n);
  if (l == 0) {
    double sum = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
      sum += (x[i] * x[i + h]) * (x[i] * x[i + k]);
    }
    return nn * (sum / static_cast<double>(count) - gamma_h * gamma_k);
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double y1 = (x[i] * x[i + h]) * (x[i + l] * x[i + l + k]);
    const double y2 = (x[i + l] * x[i + l + h]) * (x[i] * x[i + k]);
    sum += y1 + y2;
  }
  return static_cast<double>(n - l) *
         (sum / static_cast<double>(count) - 2.0 * gamma_h * gamma_k);
}

inline double theta_bar_impl(std::span<const double> x, std::size_t h,
                             std::size_t k, std::size_t trunc, double gamma_h,
                             double gamma_k) {
  double total = 0.0;
  for (std::size_t l = 0; l <= trunc; ++l) {
    total += sigma_bar_impl(x, h, k, l, gamma_h, gamma_k);
  }
  return total / static_cast<double>(x.size());
}

}  // namespace detail

/// Estimated contribution of displacement l to n*Cov(gamma(h), gamma(k)).
///
/// Fourth-order products whose largest index i+l+max(h,k) exceeds n are
/// dropped; the inner average divides by the number of retained products.
inline double sigma_bar(const TimeSeries& x, std::size_t h, std::size_t k,
                        std::size_t l) {
  const std::size_t n = x.size();
  if (h >= n || k >= n || l >= n) {
    throw DomainError("sigma_bar indices (h=" + std::to_string(h) +
                      ", k=" + std::to_string(k) + ", l=" + std::to_string(l) +
                      ") out of range for n = " + std::to_string(n));
  }
  return detail::sigma_bar_impl(x.values(), h, k, l, circular_autocov(x, h),
                                circular_autocov(x, k));
}

/// Truncated estimate of n*Cov(gamma(h), gamma(k)): (1/n) sum_{l=0}^{h_n}
/// sigma_bar(l) with h_n = truncation_lag(n, beta).
inline double theta_bar(const TimeSeries& x, std::size_t h, std::size_t k,
                        const EstimatorConfig& cfg) {
  cfg.validate();
  const std::size_t n = x.size();
  if (h >= n || k >= n) {
    throw DomainError("theta_bar lags out of range for n = " +
                      std::to_string(n));
  }
  const std::size_t trunc = truncation_lag(n, cfg.beta);
  return detail::theta_bar_impl(x.values(), h, k, trunc, circular_autocov(x, h),
                                circular_autocov(x, k));
}

/// Floors the eigenvalues of a symmetric matrix at `floor` and returns the
/// reconstruction. Matrices already above the floor are returned unchanged.
inline Eigen::MatrixXd floor_eigenvalues(const Eigen::MatrixXd& raw,
                                         double floor) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(raw);
  if (es.info() != Eigen::Success) {
    throw NumericError("eigendecomposition of covariance estimate failed");
  }
  if (es.eigenvalues().minCoeff() >= floor) return raw;
  const Eigen::VectorXd clamped = es.eigenvalues().cwiseMax(floor);
  const Eigen::MatrixXd& v = es.eigenvectors();
  Eigen::MatrixXd out = v * clamped.asDiagonal() * v.transpose();
  // Mirror the upper triangle so the result is exactly symmetric.
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < out.cols(); ++j) out(j, i) = out(i, j);
  }
  return out;
}

/// Eigenvalue floor actually applied to `raw` under `cfg`.
inline double applied_floor(const Eigen::MatrixXd& raw,
                            const EstimatorConfig& cfg) {
  if (!cfg.relative_floor) return cfg.eps_floor;
  const double scale = raw.trace() / static_cast<double>(raw.rows());
  return scale > 0.0 ? cfg.eps_floor * scale : cfg.eps_floor;
}

/// Raw (unregularized) matrix of theta_bar(h, k), h, k = 0..max_lag.
inline Eigen::MatrixXd raw_longrun_cov(const TimeSeries& x, std::size_t max_lag,
                                       const EstimatorConfig& cfg) {
  cfg.validate();
  const std::size_t n = x.size();
  if (max_lag + 1 > n) {
    throw InsufficientDataError(n, minimum_sample_size(max_lag, cfg.beta));
  }
  const std::size_t trunc = truncation_lag(n, cfg.beta);
  if (trunc + max_lag >= n) {
    throw InsufficientDataError(n, minimum_sample_size(max_lag, cfg.beta));
  }
  std::vector<double> gammas(max_lag + 1);
  for (std::size_t h = 0; h <= max_lag; ++h) gammas[h] = circular_autocov(x, h);

  const auto dim = static_cast<Eigen::Index>(max_lag + 1);
  Eigen::MatrixXd raw(dim, dim);
  for (std::size_t h = 0; h <= max_lag; ++h) {
    for (std::size_t k = h; k <= max_lag; ++k) {
      const double v = detail::theta_bar_impl(x.values(), h, k, trunc,
                                              gammas[h], gammas[k]);
      raw(static_cast<Eigen::Index>(h), static_cast<Eigen::Index>(k)) = v;
      raw(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(h)) = v;
    }
  }
  return raw;
}

/// Positive-definite estimate of the long-run covariance of the sample
/// autocovariances at lags 0..max_lag.
inline CovMatrix estimate_longrun_cov(const TimeSeries& x, std::size_t max_lag,
                                      const EstimatorConfig& cfg = {}) {
  const Eigen::MatrixXd raw = raw_longrun_cov(x, max_lag, cfg);
  return CovMatrix(floor_eigenvalues(raw, applied_floor(raw, cfg)));
}

/// Closed-form long-run covariance for a linear process with autocovariances
/// gamma(0..M) (zero beyond M) and innovation kurtosis ratio eta
/// (E Z^4 = eta * sigma^4; eta = 3 for Gaussian noise).
inline CovMatrix bartlett_linear(std::span<const double> gamma, double eta,
                                 std::size_t max_lag) {
  if (gamma.empty()) throw DomainError("bartlett_linear needs gamma(0)");
  if (!(eta > 0.0)) throw ConfigError("eta must be positive");
  const auto support = static_cast<long>(gamma.size()) - 1;
  const auto acf = [&](long lag) {
    lag = lag < 0 ? -lag : lag;
    return lag > support ? 0.0 : gamma[static_cast<std::size_t>(lag)];
  };
  const auto lmax = static_cast<long>(support + static_cast<long>(max_lag));
  const auto dim = static_cast<Eigen::Index>(max_lag + 1);
  Eigen::MatrixXd c(dim, dim);
  for (long i = 0; i <= static_cast<long>(max_lag); ++i) {
    for (long j = i; j <= static_cast<long>(max_lag); ++j) {
      double s = 0.0;
      for (long l = -lmax; l <= lmax; ++l) {
        s += acf(l) * acf(l - i + j) + acf(l + j) * acf(l - i);
      }
      s += (eta - 3.0) * acf(i) * acf(j);
      c(i, j) = s;
      c(j, i) = s;
    }
  }
  return CovMatrix(std::move(c));
}

}  // namespace cssm
