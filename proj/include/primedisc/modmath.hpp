#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace primedisc {

/// Inverse of j modulo p, normalized into {1, ..., p-1}.
///
/// Uses the extended Euclidean algorithm, so p only needs to be coprime to j;
/// callers pass primes. Throws std::invalid_argument if p < 2, if j is
/// divisible by p, or if j has no inverse modulo p.
inline std::int64_t mod_inverse(std::int64_t j, std::int64_t p) {
  if (p < 2) throw std::invalid_argument("modulus must be at least 2");
  std::int64_t a = j % p;
  if (a < 0) a += p;
  if (a == 0)
    throw std::invalid_argument(std::to_string(j) + " is not invertible modulo " +
                                std::to_string(p));

  // Invariant: old_r = old_s * a (mod p), r = s * a (mod p).
  std::int64_t old_r = a, r = p;
  std::int64_t old_s = 1, s = 0;
  while (r != 0) {
    const std::int64_t q = old_r / r;
    std::int64_t t = old_r - q * r;
    old_r = r;
    r = t;
    t = old_s - q * s;
    old_s = s;
    s = t;
  }
  if (old_r != 1)
    throw std::invalid_argument(std::to_string(j) + " shares a factor with " +
                                std::to_string(p));
  std::int64_t v = old_s % p;
  if (v < 0) v += p;
  return v;
}

namespace detail {

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp,
                             std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

}  // namespace detail

/// Deterministic primality test for the full 64-bit range (Miller-Rabin with
/// the first twelve prime bases).
inline bool is_prime(std::uint64_t n) {
  constexpr std::array<std::uint64_t, 12> bases = {2,  3,  5,  7,  11, 13,
                                                   17, 19, 23, 29, 31, 37};
  if (n < 2) return false;
  for (std::uint64_t b : bases) {
    if (n % b == 0) return n == b;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : bases) {
    std::uint64_t x = detail::pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = detail::mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

}  // namespace primedisc
