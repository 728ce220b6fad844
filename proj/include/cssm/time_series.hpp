#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cssm/errors.hpp"

namespace cssm {

/// An ordered, immutable sequence of finite real observations.
///
/// The test statistics assume a mean-zero process; no centering is applied
/// here. Use `centered()` explicitly for raw data with a nonzero level.
class TimeSeries {
 public:
  explicit TimeSeries(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) {
      throw DomainError("time series must contain at least one observation");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (!std::isfinite(values_[i])) {
        throw NumericError("time series value at index " + std::to_string(i) +
                           " is not finite");
      }
    }
  }

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }

  auto begin() const noexcept { return values_.cbegin(); }
  auto end() const noexcept { return values_.cend(); }

  /// Copy with every value multiplied by `c`.
  TimeSeries scaled(double c) const {
    std::vector<double> out(values_);
    for (double& v : out) v *= c;
    return TimeSeries(std::move(out));
  }

  /// Copy with the sample mean subtracted.
  TimeSeries centered() const {
    double sum = 0.0;
    for (double v : values_) sum += v;
    const double mean = sum / static_cast<double>(values_.size());
    std::vector<double> out(values_);
    for (double& v : out) v -= mean;
    return TimeSeries(std::move(out));
  }

 private:
  std::vector<double> values_;
};

}  // namespace cssm
