#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

#include "primedisc/errors.hpp"

namespace primedisc {

using int128 = __int128;

namespace detail {

constexpr int128 abs128(int128 v) { return v < 0 ? -v : v; }

constexpr int128 gcd128(int128 a, int128 b) {
  a = abs128(a);
  b = abs128(b);
  while (b != 0) {
    int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

constexpr bool fits_int64(int128 v) {
  return v >= std::numeric_limits<std::int64_t>::min() &&
         v <= std::numeric_limits<std::int64_t>::max();
}

inline double ratio_to_double(std::int64_t num, std::int64_t den) {
  // Both operands are exact in long double (64-bit mantissa); the quotient is
  // then rounded once more, which stays within one ulp of the true value.
  return static_cast<double>(static_cast<long double>(num) /
                             static_cast<long double>(den));
}

}  // namespace detail

/// Reduced signed rational with a positive denominator.
///
/// Every operation computes in 128-bit intermediates and throws CapacityError
/// if the reduced result does not fit back into 64 bits.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t value) : num_(value) {}  // NOLINT

  static constexpr Rational from_int128(int128 num, int128 den) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const int128 g = detail::gcd128(num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
    if (!detail::fits_int64(num) || !detail::fits_int64(den))
      throw CapacityError("rational value exceeds 64-bit numerator/denominator");
    Rational r;
    r.num_ = static_cast<std::int64_t>(num);
    r.den_ = static_cast<std::int64_t>(den);
    return r;
  }

  constexpr Rational(std::int64_t num, std::int64_t den) {
    *this = from_int128(num, den);
  }

  constexpr std::int64_t num() const { return num_; }
  constexpr std::int64_t den() const { return den_; }

  double to_double() const { return detail::ratio_to_double(num_, den_); }

  constexpr Rational abs() const {
    Rational r = *this;
    if (r.num_ < 0) r.num_ = -r.num_;
    return r;
  }

  friend constexpr Rational operator+(const Rational& a, const Rational& b) {
    return from_int128(int128{a.num_} * b.den_ + int128{b.num_} * a.den_,
                       int128{a.den_} * b.den_);
  }
  friend constexpr Rational operator-(const Rational& a, const Rational& b) {
    return from_int128(int128{a.num_} * b.den_ - int128{b.num_} * a.den_,
                       int128{a.den_} * b.den_);
  }
  friend constexpr Rational operator*(const Rational& a, const Rational& b) {
    return from_int128(int128{a.num_} * b.num_, int128{a.den_} * b.den_);
  }
  friend constexpr Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::invalid_argument("division by zero rational");
    return from_int128(int128{a.num_} * b.den_, int128{a.den_} * b.num_);
  }

  friend constexpr bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend constexpr std::strong_ordering operator<=>(const Rational& a,
                                                    const Rational& b) {
    const int128 lhs = int128{a.num_} * b.den_;
    const int128 rhs = int128{b.num_} * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  std::string to_string() const {
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.num_ << '/' << r.den_;
  }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// A sequence element num/den strictly inside (0,1).
///
/// The fraction keeps the denominator it was constructed with (2/4 stays 2/4)
/// so block algorithms can rely on a shared denominator. Equality and ordering
/// compare values, so 2/4 == 1/2; use same_representation() to compare the
/// stored pair.
class Fraction {
 public:
  constexpr Fraction() = default;
  constexpr Fraction(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
    if (den < 2 || num < 1 || num > den - 1)
      throw std::invalid_argument("fraction " + std::to_string(num) + "/" +
                                  std::to_string(den) +
                                  " is not strictly inside (0,1)");
  }

  constexpr std::int64_t num() const { return num_; }
  constexpr std::int64_t den() const { return den_; }

  constexpr Rational value() const { return Rational(num_, den_); }
  double to_double() const { return detail::ratio_to_double(num_, den_); }

  constexpr bool same_representation(const Fraction& other) const {
    return num_ == other.num_ && den_ == other.den_;
  }

  friend constexpr bool operator==(const Fraction& a, const Fraction& b) {
    return int128{a.num_} * b.den_ == int128{b.num_} * a.den_;
  }
  friend constexpr std::strong_ordering operator<=>(const Fraction& a,
                                                    const Fraction& b) {
    const int128 lhs = int128{a.num_} * b.den_;
    const int128 rhs = int128{b.num_} * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  std::string to_string() const {
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  friend std::ostream& operator<<(std::ostream& os, const Fraction& f) {
    return os << f.num_ << '/' << f.den_;
  }

 private:
  std::int64_t num_ = 1;
  std::int64_t den_ = 2;
};

}  // namespace primedisc
