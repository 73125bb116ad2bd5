#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "primedisc/discrepancy.hpp"
#include "primedisc/errors.hpp"
#include "primedisc/primes.hpp"
#include "primedisc/rational.hpp"
#include "primedisc/sequences.hpp"

namespace primedisc {

/// Principal branch W(x) of the inverse of w e^w, for x >= -1/e.
///
/// Halley iteration started from the branch-point series near -1/e, from x
/// itself for small |x|, from log1p(x) up to e and from the two-term asymptotic
/// ln x - ln ln x beyond.
inline double lambert_w(double x) {
  constexpr double inv_e = 1.0 / std::numbers::e;
  if (std::isnan(x) || x < -inv_e)
    throw std::domain_error("lambert_w: argument below -1/e");
  if (x == -inv_e) return -1.0;
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return x;

  double w;
  if (x < -0.25) {
    const double p = std::sqrt(2.0 * (std::numbers::e * x + 1.0));
    w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
  } else if (x < inv_e) {
    w = x;
  } else if (x <= std::numbers::e) {
    w = std::log1p(x) * 0.75;
  } else {
    const double l1 = std::log(x);
    const double l2 = std::log(l1);
    w = l1 - l2 + l2 / l1;
  }

  const double tolerance = 1e-12 * std::max(1.0, std::abs(x));
  for (int iter = 0; iter < 50; ++iter) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double wp1 = w + 1.0;
    if (f == 0.0 || wp1 == 0.0) break;
    const double step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
    w -= step;
    if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() *
                              std::max(1.0, std::abs(w)))
      break;
  }
  if (!(std::abs(w * std::exp(w) - x) <= tolerance))
    throw NumericalError("lambert_w did not converge for x = " + std::to_string(x));
  return w;
}

/// |e^W(x) - x / W(x)| / max(1, |x / W(x)|).
inline double lambert_identity_residual(double x) {
  if (x == 0.0) throw std::invalid_argument("identity undefined at x = 0");
  const double w = lambert_w(x);
  const double rhs = x / w;
  return std::abs(std::exp(w) - rhs) / std::max(1.0, std::abs(rhs));
}

/// Leading-order prediction 2 sqrt(N / ln N) of the block index m(N).
inline double m_asymptotic(std::uint64_t length) {
  if (length < 2) throw std::invalid_argument("m_asymptotic needs N >= 2");
  const double n = static_cast<double>(length);
  return 2.0 * std::sqrt(n / std::log(n));
}

/// sqrt(N ln N) * D.
inline double scaled_discrepancy(std::uint64_t length, double disc) {
  if (length < 2) throw std::invalid_argument("scaled discrepancy needs N >= 2");
  const double n = static_cast<double>(length);
  return std::sqrt(n * std::log(n)) * disc;
}

inline double scaled_discrepancy(std::uint64_t length, const DiscrepancyValue& disc) {
  return scaled_discrepancy(length, disc.approx);
}

/// Discrepancy of the eta prefix ending at a block boundary.
struct TheoremRow {
  std::uint64_t m = 0;
  std::uint64_t n = 0;      // P(m)
  std::uint64_t p_m = 0;
  DiscrepancyValue disc;    // D_N*(eta)
  std::optional<double> scaled;  // absent for N = 1
  Rational lower;           // 1 / (2 p_m)
};

/// Rows for m_lo..m_hi, handed to `on_row` in increasing m.
///
/// One eta prefix is extended block by block, so the total cost is dominated
/// by the merges and sweeps over the growing sorted prefix. Throws
/// std::logic_error if a row violates D_N* >= 1/(2 p_m).
template <class OnRow>
void verify_theorem(const PrimeTable& table, std::uint64_t m_lo, std::uint64_t m_hi,
                    OnRow&& on_row) {
  if (m_lo < 1) throw std::invalid_argument("block range starts at m = 1");
  if (m_lo > m_hi) throw std::invalid_argument("empty block range");
  if (m_hi > table.size())
    throw TableTooSmall("block " + std::to_string(m_hi) + " is beyond the table",
                        m_hi);

  IncrementalDiscrepancy prefix;
  for (std::uint64_t m = 1; m <= m_hi; ++m) {
    const auto p = static_cast<std::int64_t>(table.prime(m));
    prefix.append(generate_block({p, Ordering::Inversive}));
    if (m < m_lo) continue;

    TheoremRow row;
    row.m = m;
    row.n = table.cumulative_P(m);
    row.p_m = static_cast<std::uint64_t>(p);
    row.disc = prefix.discrepancy();
    if (row.n >= 2) row.scaled = scaled_discrepancy(row.n, row.disc);
    row.lower = Rational(1, 2 * p);
    if (row.disc.exact < row.lower)
      throw std::logic_error("D_N* below 1/(2 p_m) at m = " + std::to_string(m));
    on_row(row);
  }
}

inline std::vector<TheoremRow> verify_theorem(const PrimeTable& table,
                                              std::uint64_t m_lo,
                                              std::uint64_t m_hi) {
  std::vector<TheoremRow> rows;
  verify_theorem(table, m_lo, m_hi, [&](const TheoremRow& row) { rows.push_back(row); });
  return rows;
}

/// D_N* of the family's prefix for each requested length, reusing one sorted
/// prefix. Lengths must be positive; results follow the input order.
inline std::vector<DiscrepancyValue> prefix_discrepancies(
    Family family, std::span<const std::uint64_t> lengths, const PrimeTable& table) {
  std::vector<std::size_t> order(lengths.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return lengths[a] < lengths[b]; });

  std::vector<DiscrepancyValue> out(lengths.size());
  SequenceCursor cursor(family, table);
  IncrementalDiscrepancy prefix;
  std::vector<Fraction> chunk;
  for (std::size_t idx : order) {
    const std::uint64_t n = lengths[idx];
    if (n == 0) throw std::invalid_argument("prefix length must be >= 1");
    chunk.clear();
    cursor.take(n - cursor.position(), chunk);
    prefix.append(chunk);
    out[idx] = prefix.discrepancy();
  }
  return out;
}

}  // namespace primedisc
