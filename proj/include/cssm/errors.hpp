#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cssm {

/// Index or shape precondition violated (lag out of range, dimension mismatch).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Invalid configuration value (beta outside (0, 1/2), unknown alpha, ...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Non-finite or otherwise unusable numbers reached a numeric kernel.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The series is too short for the requested max lag and truncation lag.
class InsufficientDataError : public DomainError {
 public:
  InsufficientDataError(std::size_t have, std::size_t minimum)
      : DomainError("insufficient data: n = " + std::to_string(have) +
                    ", at least " + std::to_string(minimum) +
                    " observations are required"),
        have_(have),
        minimum_(minimum) {}

  std::size_t have() const noexcept { return have_; }
  std::size_t minimum() const noexcept { return minimum_; }

 private:
  std::size_t have_;
  std::size_t minimum_;
};

}  // namespace cssm
