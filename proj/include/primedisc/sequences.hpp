#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "primedisc/errors.hpp"
#include "primedisc/modmath.hpp"
#include "primedisc/primes.hpp"
#include "primedisc/rational.hpp"

namespace primedisc {

/// How the numerators 1..p-1 of a block are ordered.
enum class Ordering {
  Inversive,   // element j is (j^-1 mod p) / p
  Increasing,  // element j is j / p
};

/// The three concatenated block sequences.
enum class Family {
  Eta,              // inversive blocks over the primes 2, 3, 5, ...
  Omega,            // increasing blocks over every denominator 2, 3, 4, ...
  PrimeIncreasing,  // increasing blocks over the primes
};

inline std::string_view to_string(Ordering o) {
  return o == Ordering::Inversive ? "inversive" : "increasing";
}

inline std::string_view to_string(Family f) {
  switch (f) {
    case Family::Eta: return "eta";
    case Family::Omega: return "omega";
    case Family::PrimeIncreasing: return "prime-increasing";
  }
  return "?";
}

inline std::optional<Ordering> parse_ordering(std::string_view s) {
  if (s == "inversive") return Ordering::Inversive;
  if (s == "increasing") return Ordering::Increasing;
  return std::nullopt;
}

inline std::optional<Family> parse_family(std::string_view s) {
  if (s == "eta") return Family::Eta;
  if (s == "omega") return Family::Omega;
  if (s == "prime-increasing") return Family::PrimeIncreasing;
  return std::nullopt;
}

/// One block: a prime denominator and an ordering rule.
struct BlockSpec {
  std::int64_t p = 2;
  Ordering ordering = Ordering::Inversive;

  void validate() const {
    if (p < 2 || !is_prime(static_cast<std::uint64_t>(p)))
      throw std::invalid_argument("block denominator " + std::to_string(p) +
                                  " is not prime");
  }
};

/// Element j (1-based) of the block with denominator `den`.
inline Fraction block_element(std::int64_t den, Ordering ordering, std::int64_t j) {
  const std::int64_t num =
      ordering == Ordering::Inversive ? mod_inverse(j, den) : j;
  return Fraction(num, den);
}

inline std::vector<Fraction> generate_block(const BlockSpec& spec) {
  spec.validate();
  std::vector<Fraction> out;
  out.reserve(static_cast<std::size_t>(spec.p - 1));
  for (std::int64_t j = 1; j < spec.p; ++j)
    out.push_back(block_element(spec.p, spec.ordering, j));
  return out;
}

inline Ordering family_ordering(Family f) {
  return f == Family::Eta ? Ordering::Inversive : Ordering::Increasing;
}

inline bool family_uses_primes(Family f) { return f != Family::Omega; }

/// Denominator of block m (1-based).
inline std::int64_t block_denominator(Family f, std::uint64_t m,
                                      const PrimeTable& table) {
  if (m == 0) throw std::invalid_argument("block index must be >= 1");
  if (!family_uses_primes(f)) return static_cast<std::int64_t>(m + 1);
  if (m > table.size())
    throw TableTooSmall("block " + std::to_string(m) + " of " +
                            std::string(to_string(f)) + " needs prime p_" +
                            std::to_string(m),
                        m);
  return static_cast<std::int64_t>(table.prime(m));
}

/// Position of a global 1-based index: block m and offset 1..block size.
struct BlockPosition {
  std::uint64_t block = 1;
  std::uint64_t offset = 1;

  friend bool operator==(const BlockPosition&, const BlockPosition&) = default;
};

inline BlockPosition locate(Family f, std::uint64_t n, const PrimeTable& table) {
  if (n == 0) throw std::invalid_argument("sequence index is 1-based");
  if (!family_uses_primes(f)) {
    // Omega's first m blocks hold m(m+1)/2 elements.
    auto tri = [](std::uint64_t m) { return m * (m + 1) / 2; };
    auto m = static_cast<std::uint64_t>(
        std::ceil((std::sqrt(8.0 * static_cast<double>(n) + 1.0) - 1.0) / 2.0));
    while (m > 1 && tri(m - 1) >= n) --m;
    while (tri(m) < n) ++m;
    return {m, n - tri(m - 1)};
  }
  const auto cum = table.cumulative();
  if (cum.back() < n)
    throw TableTooSmall("index " + std::to_string(n) + " lies beyond " +
                            std::to_string(table.size()) + " blocks",
                        required_primes_for_length(n - 1));
  // First m with P(m) >= n.
  const auto it = std::lower_bound(cum.begin(), cum.end(), n);
  const auto m = static_cast<std::uint64_t>(it - cum.begin());
  return {m, n - cum[m - 1]};
}

/// Resumable element-by-element walk over a family.
///
/// The cursor keeps a reference to the table; the table must outlive it.
class SequenceCursor {
 public:
  SequenceCursor(Family family, const PrimeTable& table)
      : family_(family), table_(&table) {}

  Family family() const { return family_; }

  /// Number of elements produced so far.
  std::uint64_t position() const { return position_; }

  Fraction next() {
    if (offset_ == 0 || offset_ == static_cast<std::uint64_t>(den_ - 1)) {
      den_ = block_denominator(family_, block_ + 1, *table_);
      ++block_;
      offset_ = 0;
    }
    ++offset_;
    ++position_;
    return block_element(den_, family_ordering(family_),
                         static_cast<std::int64_t>(offset_));
  }

  /// Appends the next `count` elements to `out`.
  void take(std::uint64_t count, std::vector<Fraction>& out) {
    for (std::uint64_t i = 0; i < count; ++i) out.push_back(next());
  }

 private:
  Family family_;
  const PrimeTable* table_;
  std::uint64_t block_ = 0;
  std::uint64_t offset_ = 0;
  std::int64_t den_ = 0;
  std::uint64_t position_ = 0;
};

/// First `length` terms of the family, blocks concatenated in order.
inline std::vector<Fraction> generate_prefix(Family f, std::uint64_t length,
                                             const PrimeTable& table) {
  if (length == 0) throw std::invalid_argument("prefix length must be >= 1");
  if (family_uses_primes(f) && table.cumulative().back() < length)
    throw TableTooSmall("prefix of length " + std::to_string(length) +
                            " exceeds " + std::to_string(table.size()) + " blocks",
                        required_primes_for_length(length - 1));
  SequenceCursor cursor(f, table);
  std::vector<Fraction> out;
  cursor.take(length, out);
  return out;
}

}  // namespace primedisc
