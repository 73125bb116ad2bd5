#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace primedisc {

// Invalid arguments are reported with std::invalid_argument, index misses with
// std::out_of_range and Lambert W domain violations with std::domain_error.
// The types below cover the remaining failure modes.

/// An exact result would not fit the fixed-width integer representation.
class CapacityError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

/// A prime table does not hold enough primes for the request.
class TableTooSmall : public std::out_of_range {
 public:
  TableTooSmall(const std::string& what, std::uint64_t required_primes)
      : std::out_of_range(what + " (requires a table of at least " +
                          std::to_string(required_primes) + " primes)"),
        required_(required_primes) {}

  std::uint64_t required_primes() const noexcept { return required_; }

 private:
  std::uint64_t required_;
};

/// An iterative numerical method failed to converge.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace primedisc
