#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "primedisc/errors.hpp"

namespace primedisc {

/// The first M primes together with the cumulative block sizes
/// P(m) = (p_1 - 1) + ... + (p_m - 1), with P(0) = 0.
///
/// Immutable after construction; every query is a pure read.
class PrimeTable {
 public:
  /// Sieve of Eratosthenes sized by p_M < M (ln M + ln ln M) for M >= 6.
  static PrimeTable build(std::uint64_t count);

  /// Smallest table whose cumulative sizes strictly exceed `length`, i.e. one
  /// that can answer block_index_of(length).
  static PrimeTable covering(std::uint64_t length);

  std::uint64_t size() const { return primes_.size(); }

  /// p_m, 1-based.
  std::uint64_t prime(std::uint64_t m) const {
    if (m < 1 || m > size())
      throw std::out_of_range("prime index " + std::to_string(m) +
                              " outside [1, " + std::to_string(size()) + "]");
    return primes_[m - 1];
  }

  std::span<const std::uint64_t> primes() const { return primes_; }
  std::span<const std::uint64_t> cumulative() const { return cumulative_; }

  /// P(m), 0 <= m <= M.
  std::uint64_t cumulative_P(std::uint64_t m) const {
    if (m > size())
      throw std::out_of_range("block count " + std::to_string(m) +
                              " exceeds table size " + std::to_string(size()));
    return cumulative_[m];
  }

  /// The unique m with P(m) <= length < P(m+1).
  std::uint64_t block_index_of(std::uint64_t length) const;

  /// p_m / (m ln m), which tends to 1.
  double pnt_ratio(std::uint64_t m) const {
    check_ratio_index(m);
    const double mf = static_cast<double>(m);
    return static_cast<double>(prime(m)) / (mf * std::log(mf));
  }

  /// P(m) / ((m^2 / 2) ln m), which tends to 1.
  double sum_ratio(std::uint64_t m) const {
    check_ratio_index(m);
    const double mf = static_cast<double>(m);
    return static_cast<double>(cumulative_P(m)) / (0.5 * mf * mf * std::log(mf));
  }

 private:
  PrimeTable() = default;

  void check_ratio_index(std::uint64_t m) const {
    if (m <= 1) throw std::invalid_argument("ratio needs m >= 2 (ln 1 = 0)");
    if (m > size())
      throw std::out_of_range("index " + std::to_string(m) +
                              " exceeds table size " + std::to_string(size()));
  }

  std::vector<std::uint64_t> primes_;
  std::vector<std::uint64_t> cumulative_;
};

/// Upper bound on the M-th prime used to size the sieve.
inline std::uint64_t nth_prime_upper_bound(std::uint64_t count) {
  if (count < 6) return 13;
  const double m = static_cast<double>(count);
  return static_cast<std::uint64_t>(m * (std::log(m) + std::log(std::log(m)))) + 1;
}

/// Number of primes M with P(M) > length, the minimum a table needs to answer
/// block_index_of(length).
inline std::uint64_t required_primes_for_length(std::uint64_t length);

inline PrimeTable PrimeTable::build(std::uint64_t count) {
  if (count == 0) throw std::invalid_argument("prime table needs M >= 1");
  const std::uint64_t limit = nth_prime_upper_bound(count);
  // A sieve over more than 2^36 integers is far beyond any usable table.
  if (limit > (std::uint64_t{1} << 36))
    throw CapacityError("prime table of " + std::to_string(count) +
                        " primes is too large to sieve");

  std::vector<bool> composite(limit + 1, false);
  PrimeTable table;
  table.primes_.reserve(count);
  for (std::uint64_t i = 2; i <= limit && table.primes_.size() < count; ++i) {
    if (composite[i]) continue;
    table.primes_.push_back(i);
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  if (table.primes_.size() < count)
    throw std::logic_error("prime sieve bound too small");

  table.cumulative_.reserve(count + 1);
  table.cumulative_.push_back(0);
  for (std::uint64_t p : table.primes_) {
    std::uint64_t next = 0;
    if (__builtin_add_overflow(table.cumulative_.back(), p - 1, &next))
      throw CapacityError("cumulative block size overflows 64 bits");
    table.cumulative_.push_back(next);
  }
  return table;
}

inline std::uint64_t PrimeTable::block_index_of(std::uint64_t length) const {
  if (length == 0) throw std::invalid_argument("sequence length must be >= 1");
  if (length >= cumulative_.back())
    throw TableTooSmall("length " + std::to_string(length) +
                            " is not bracketed by a table of " +
                            std::to_string(size()) + " primes",
                        required_primes_for_length(length));
  // First index with cumulative > length, minus one.
  const auto it =
      std::upper_bound(cumulative_.begin(), cumulative_.end(), length);
  return static_cast<std::uint64_t>(it - cumulative_.begin()) - 1;
}

inline std::uint64_t required_primes_for_length(std::uint64_t length) {
  // P(m) is roughly (m^2/2) ln m; start from twice the square-root estimate and
  // double until the table brackets the length.
  const double n = static_cast<double>(std::max<std::uint64_t>(length, 3));
  std::uint64_t count =
      static_cast<std::uint64_t>(2.0 * std::sqrt(n / std::log(n))) + 8;
  for (;;) {
    PrimeTable table = PrimeTable::build(count);
    const auto cum = table.cumulative();
    if (cum.back() > length) {
      const auto it = std::upper_bound(cum.begin(), cum.end(), length);
      return static_cast<std::uint64_t>(it - cum.begin());
    }
    count *= 2;
  }
}

inline PrimeTable PrimeTable::covering(std::uint64_t length) {
  return build(required_primes_for_length(length));
}

/// Free-function spellings of the table queries.
inline PrimeTable build_prime_table(std::uint64_t count) {
  return PrimeTable::build(count);
}
inline std::uint64_t cumulative_P(const PrimeTable& table, std::uint64_t m) {
  return table.cumulative_P(m);
}
inline std::uint64_t block_index_of(const PrimeTable& table, std::uint64_t length) {
  return table.block_index_of(length);
}
inline double pnt_ratio(const PrimeTable& table, std::uint64_t m) {
  return table.pnt_ratio(m);
}
inline double sum_ratio(const PrimeTable& table, std::uint64_t m) {
  return table.sum_ratio(m);
}

}  // namespace primedisc
