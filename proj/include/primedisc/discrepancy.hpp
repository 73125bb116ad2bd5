#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "primedisc/errors.hpp"
#include "primedisc/modmath.hpp"
#include "primedisc/rational.hpp"
#include "primedisc/sequences.hpp"

namespace primedisc {

// Counting convention: A_N(r) is the number of points in the closed interval
// [0, r], duplicates counted with multiplicity, and
//
//     D_N* = sup_{0 < r <= 1} | A_N(r) / N - r |.
//
// The supremum is reached either at a point value r = x (deviation A/N - r) or
// approached from the left of a point value (deviation r - A(r^-)/N).

/// Which side of the witness threshold realizes the supremum.
enum class WitnessSide {
  At,         // attained at r = witness with the closed count A(witness)
  LeftLimit,  // approached as r -> witness from below
};

inline std::string_view to_string(WitnessSide s) {
  return s == WitnessSide::At ? "at" : "left";
}

struct DiscrepancyValue {
  Rational exact;
  double approx = 0.0;
  Rational witness;
  WitnessSide side = WitnessSide::At;
};

/// D_k* of the first k points together with k * D_k*.
struct ScanRecord {
  std::uint64_t k = 0;
  DiscrepancyValue disc;
  Rational weighted;
};

/// |A(r)/N - r| for side At, or its left limit |A(r^-)/N - r| for LeftLimit.
/// Direct O(N) evaluation, used to audit witnesses.
inline Rational evaluate_deviation(std::span<const Fraction> points,
                                   const Rational& r, WitnessSide side) {
  if (points.empty()) throw std::invalid_argument("no points");
  std::int64_t count = 0;
  for (const auto& x : points) {
    const auto c = x.value() <=> r;
    if (c < 0 || (c == 0 && side == WitnessSide::At)) ++count;
  }
  return (Rational(count, static_cast<std::int64_t>(points.size())) - r).abs();
}

namespace detail {

inline void require_points(std::span<const Fraction> points) {
  if (points.empty())
    throw std::invalid_argument("discrepancy of an empty point list");
}

/// Throws unless den * n fits a signed 64-bit integer, which keeps every
/// candidate numerator and denominator below 2^63 and every cross product
/// below 2^126.
inline void require_capacity(std::int64_t max_den, std::uint64_t n) {
  int128 product = int128{max_den} * static_cast<int128>(n);
  if (product > std::numeric_limits<std::int64_t>::max())
    throw CapacityError("denominator " + std::to_string(max_den) + " times " +
                        std::to_string(n) + " points exceeds 64 bits");
}

/// Running maximum of nonnegative ratios num/den (den > 0), keeping the first
/// maximizer. Candidates are screened in double precision and only those near
/// the current best are compared exactly.
class MaxRatio {
 public:
  bool offer(std::int64_t num, std::int64_t den) {
    if (num <= 0) return false;
    const double approx = static_cast<double>(num) / static_cast<double>(den);
    if (approx < screen_) return false;
    if (int128{num} * den_ <= int128{num_} * den) return false;
    num_ = num;
    den_ = den;
    screen_ = approx * (1.0 - 1e-12);
    return true;
  }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
  double screen_ = 0.0;
};

inline DiscrepancyValue make_value(const Rational& exact, const Rational& witness,
                                   WitnessSide side) {
  return DiscrepancyValue{exact, exact.to_double(), witness, side};
}

/// Star discrepancy of points already sorted by value.
inline DiscrepancyValue sorted_discrepancy(std::span<const Fraction> sorted,
                                           std::int64_t max_den) {
  const std::uint64_t count = sorted.size();
  require_capacity(max_den, count);
  const auto n = static_cast<std::int64_t>(count);

  MaxRatio best;
  const Fraction* witness = nullptr;
  WitnessSide side = WitnessSide::At;
  for (std::int64_t i = 1; i <= n; ++i) {
    const Fraction& x = sorted[static_cast<std::size_t>(i - 1)];
    const std::int64_t a = x.num();
    const std::int64_t q = x.den();
    const std::int64_t qn = q * n;
    // i/N - x at r = x, and x - (i-1)/N as r -> x from below, both over qN.
    if (best.offer(i * q - a * n, qn)) {
      witness = &x;
      side = WitnessSide::At;
    }
    if (best.offer(a * n - (i - 1) * q, qn)) {
      witness = &x;
      side = WitnessSide::LeftLimit;
    }
  }
  return make_value(Rational::from_int128(best.num(), best.den()),
                    witness->value(), side);
}

inline std::int64_t max_denominator(std::span<const Fraction> points) {
  std::int64_t m = 0;
  for (const auto& x : points) m = std::max(m, x.den());
  return m;
}

inline bool value_less(const Fraction& a, const Fraction& b) { return a < b; }

/// Prefix sweep over points sharing the denominator q, numerators given in
/// sequence order. For each k calls on_prefix(k, best_num, j, side) where
/// best_num / q = k * D_k* and the witness threshold is j / q.
///
/// With C_j the number of the first k numerators that are <= j, the candidates
/// are q C_j - k j (at r = j/q) and k (j+1) - q C_j (r -> (j+1)/q from below).
template <class OnPrefix>
void common_denominator_sweep(std::span<const std::int64_t> numerators,
                              std::int64_t q, OnPrefix&& on_prefix) {
  require_capacity(q, numerators.size() + 1);
  std::vector<std::int64_t> count(static_cast<std::size_t>(q), 0);
  std::int64_t k = 0;
  for (std::int64_t v : numerators) {
    ++count[static_cast<std::size_t>(v)];
    ++k;
    std::int64_t best = 0;
    std::int64_t best_j = 0;
    WitnessSide side = WitnessSide::At;
    std::int64_t cumulative = 0;
    for (std::int64_t j = 0; j < q; ++j) {
      cumulative += count[static_cast<std::size_t>(j)];
      const std::int64_t at = q * cumulative - k * j;
      const std::int64_t left = k * (j + 1) - q * cumulative;
      if (at > best) {
        best = at;
        best_j = j;
        side = WitnessSide::At;
      }
      if (left > best) {
        best = left;
        best_j = j + 1;
        side = WitnessSide::LeftLimit;
      }
    }
    on_prefix(static_cast<std::uint64_t>(k), best, best_j, side);
  }
}

}  // namespace detail

/// Exact star discrepancy of the whole list (order irrelevant).
///
/// Sorts by value and takes, over the sorted x_(1) <= ... <= x_(N), the
/// maximum of i/N - x_(i) and x_(i) - (i-1)/N.
inline DiscrepancyValue star_discrepancy(std::span<const Fraction> points) {
  detail::require_points(points);
  std::vector<Fraction> sorted(points.begin(), points.end());
  std::sort(sorted.begin(), sorted.end(), detail::value_less);
  return detail::sorted_discrepancy(sorted, detail::max_denominator(points));
}

/// Brute-force star discrepancy over every critical threshold, O(N^2).
///
/// For each distinct value v evaluates |c(v)/N - v| and |c-(v)/N - v| with
/// c(v) = #{x <= v} and c-(v) = #{x < v}. Independent of the sorted formula
/// and used to cross-check it.
inline DiscrepancyValue star_discrepancy_oracle(std::span<const Fraction> points) {
  detail::require_points(points);
  detail::require_capacity(detail::max_denominator(points), points.size());
  const auto n = static_cast<std::int64_t>(points.size());

  std::vector<Rational> values;
  values.reserve(points.size());
  for (const auto& x : points) values.push_back(x.value());
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());

  Rational best(0);
  Rational witness = values.front();
  WitnessSide side = WitnessSide::At;
  for (const auto& v : values) {
    std::int64_t at_or_below = 0;
    std::int64_t below = 0;
    for (const auto& x : points) {
      const auto c = x.value() <=> v;
      if (c <= 0) ++at_or_below;
      if (c < 0) ++below;
    }
    const Rational closed = (Rational(at_or_below, n) - v).abs();
    const Rational open = (Rational(below, n) - v).abs();
    if (closed > best) {
      best = closed;
      witness = v;
      side = WitnessSide::At;
    }
    if (open > best) {
      best = open;
      witness = v;
      side = WitnessSide::LeftLimit;
    }
  }
  return detail::make_value(best, witness, side);
}

/// D_k* and k * D_k* for every prefix length k = 1..N (order dependent).
///
/// Points sharing one denominator q use an O(q) integer sweep per prefix;
/// otherwise each prefix is inserted into a sorted buffer and re-evaluated.
inline std::vector<ScanRecord> prefix_scan(std::span<const Fraction> points) {
  detail::require_points(points);
  std::vector<ScanRecord> records;
  records.reserve(points.size());

  const std::int64_t q = points.front().den();
  const bool common = std::all_of(points.begin(), points.end(),
                                  [q](const Fraction& x) { return x.den() == q; });
  if (common) {
    std::vector<std::int64_t> numerators;
    numerators.reserve(points.size());
    for (const auto& x : points) numerators.push_back(x.num());
    detail::common_denominator_sweep(
        numerators, q,
        [&](std::uint64_t k, std::int64_t best, std::int64_t j, WitnessSide side) {
          const Rational weighted(best, q);
          const Rational exact =
              Rational::from_int128(best, int128{q} * static_cast<int128>(k));
          records.push_back(
              {k, detail::make_value(exact, Rational(j, q), side), weighted});
        });
    return records;
  }

  const std::int64_t max_den = detail::max_denominator(points);
  detail::require_capacity(max_den, points.size());
  std::vector<Fraction> sorted;
  sorted.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Fraction& x = points[i];
    sorted.insert(std::upper_bound(sorted.begin(), sorted.end(), x, detail::value_less),
                  x);
    const auto k = static_cast<std::uint64_t>(i + 1);
    DiscrepancyValue disc = detail::sorted_discrepancy(sorted, max_den);
    const Rational weighted = disc.exact * Rational(static_cast<std::int64_t>(k));
    records.push_back({k, disc, weighted});
  }
  return records;
}

/// Default largest prime accepted by the quadratic per-block sweeps.
inline constexpr std::int64_t kDefaultSweepLimit = 30000;

struct BlockMax {
  Rational weighted;  // max over k of k * D_k*
  std::uint64_t k = 0;  // smallest maximizing k
};

namespace detail {

inline std::vector<std::int64_t> block_numerators(const BlockSpec& spec,
                                                  std::int64_t sweep_limit) {
  spec.validate();
  if (spec.p > sweep_limit)
    throw std::invalid_argument("prime " + std::to_string(spec.p) +
                                " exceeds the sweep limit " +
                                std::to_string(sweep_limit));
  std::vector<std::int64_t> numerators;
  numerators.reserve(static_cast<std::size_t>(spec.p - 1));
  for (std::int64_t j = 1; j < spec.p; ++j)
    numerators.push_back(spec.ordering == Ordering::Inversive
                             ? mod_inverse(j, spec.p)
                             : j);
  return numerators;
}

}  // namespace detail

/// k * D_k* of the block for every k = 1..p-1.
inline std::vector<Rational> block_weighted_profile(
    const BlockSpec& spec, std::int64_t sweep_limit = kDefaultSweepLimit) {
  const auto numerators = detail::block_numerators(spec, sweep_limit);
  std::vector<Rational> out;
  out.reserve(numerators.size());
  detail::common_denominator_sweep(
      numerators, spec.p,
      [&](std::uint64_t, std::int64_t best, std::int64_t, WitnessSide) {
        out.emplace_back(best, spec.p);
      });
  return out;
}

/// Maximum of k * D_k* over 1 <= k <= p-1, ties resolved to the smallest k.
inline BlockMax block_max_weighted(const BlockSpec& spec,
                                   std::int64_t sweep_limit = kDefaultSweepLimit) {
  const auto numerators = detail::block_numerators(spec, sweep_limit);
  std::int64_t best = -1;
  std::uint64_t best_k = 0;
  detail::common_denominator_sweep(
      numerators, spec.p,
      [&](std::uint64_t k, std::int64_t value, std::int64_t, WitnessSide) {
        if (value > best) {
          best = value;
          best_k = k;
        }
      });
  return {Rational(best, spec.p), best_k};
}

/// Bound (2 sqrt(p) + 1)(ln p + 1/3)^2 + k/p on k * D_k* of an inversive block.
inline double nw_bound(std::int64_t p, std::int64_t k) {
  if (p < 2 || !is_prime(static_cast<std::uint64_t>(p)))
    throw std::invalid_argument(std::to_string(p) + " is not prime");
  if (k < 1 || k > p - 1)
    throw std::invalid_argument("prefix length " + std::to_string(k) +
                                " outside [1, " + std::to_string(p - 1) + "]");
  const double pf = static_cast<double>(p);
  const double log_term = std::log(pf) + 1.0 / 3.0;
  return (2.0 * std::sqrt(pf) + 1.0) * log_term * log_term +
         static_cast<double>(k) / pf;
}

/// Arbitrary-precision rational; weighted sums over many blocks with distinct
/// denominators outgrow 64 bits quickly.
using BigRational = boost::multiprecision::cpp_rational;

inline BigRational to_big(const Rational& r) {
  return BigRational(r.num(), r.den());
}

struct TriangleBound {
  BigRational bound;         // (sum_j N_j D*(block_j)) / N
  DiscrepancyValue exact;    // D_N* of the concatenation

  bool holds() const { return to_big(exact.exact) <= bound; }
};

/// Compares the discrepancy of a concatenation with the weighted average of the
/// block discrepancies; exact <= bound always holds.
inline TriangleBound triangle_bound(std::span<const std::vector<Fraction>> blocks) {
  if (blocks.empty()) throw std::invalid_argument("no blocks");
  std::vector<Fraction> all;
  BigRational weighted_sum = 0;
  for (const auto& block : blocks) {
    detail::require_points(block);
    const auto d = star_discrepancy(block);
    weighted_sum += to_big(d.exact) * static_cast<std::int64_t>(block.size());
    all.insert(all.end(), block.begin(), block.end());
  }
  BigRational bound = weighted_sum / static_cast<std::int64_t>(all.size());
  return {std::move(bound), star_discrepancy(all)};
}

/// A growing point multiset kept sorted, so the discrepancy of a long prefix
/// can be re-evaluated after each extension without re-sorting everything.
class IncrementalDiscrepancy {
 public:
  void append(std::span<const Fraction> points) {
    if (points.empty()) return;
    chunk_.assign(points.begin(), points.end());
    std::sort(chunk_.begin(), chunk_.end(), detail::value_less);
    max_den_ = std::max(max_den_, detail::max_denominator(points));
    merged_.resize(sorted_.size() + chunk_.size());
    std::merge(sorted_.begin(), sorted_.end(), chunk_.begin(), chunk_.end(),
               merged_.begin(), detail::value_less);
    sorted_.swap(merged_);
  }

  std::uint64_t size() const { return sorted_.size(); }

  std::span<const Fraction> sorted() const { return sorted_; }

  DiscrepancyValue discrepancy() const {
    detail::require_points(sorted_);
    return detail::sorted_discrepancy(sorted_, max_den_);
  }

 private:
  std::vector<Fraction> sorted_;
  std::vector<Fraction> merged_;
  std::vector<Fraction> chunk_;
  std::int64_t max_den_ = 0;
};

}  // namespace primedisc
