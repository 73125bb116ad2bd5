#include <gtest/gtest.h>

#include <algorithm>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "primedisc/discrepancy.hpp"

using namespace primedisc;

namespace {

std::vector<Fraction> fr(std::initializer_list<std::pair<std::int64_t, std::int64_t>> v) {
  std::vector<Fraction> out;
  for (auto [n, d] : v) out.emplace_back(n, d);
  return out;
}

std::vector<Fraction> random_points(std::mt19937_64& rng, std::size_t max_size,
                                    std::int64_t max_den) {
  std::uniform_int_distribution<std::size_t> size_dist(1, max_size);
  std::uniform_int_distribution<std::int64_t> den_dist(2, max_den);
  std::vector<Fraction> out(size_dist(rng));
  for (auto& x : out) {
    const std::int64_t den = den_dist(rng);
    x = Fraction(std::uniform_int_distribution<std::int64_t>(1, den - 1)(rng), den);
  }
  return out;
}

void expect_witness_reproduces(std::span<const Fraction> points, const DiscrepancyValue& d) {
  EXPECT_EQ(evaluate_deviation(points, d.witness, d.side), d.exact);
}

}  // namespace

TEST(StarDiscrepancyTest, Examples) {
  EXPECT_EQ(star_discrepancy(fr({{1, 2}})).exact, Rational(1, 2));
  EXPECT_EQ(star_discrepancy(fr({{1, 4}, {3, 4}})).exact, Rational(1, 4));
  EXPECT_EQ(star_discrepancy(fr({{1, 4}, {2, 4}, {3, 4}})).exact, Rational(1, 4));
  EXPECT_EQ(star_discrepancy(fr({{1, 3}, {2, 3}})).exact, Rational(1, 3));
  const auto eta7 = fr({{1, 2}, {1, 3}, {2, 3}, {1, 5}, {3, 5}, {2, 5}, {4, 5}});
  const auto d = star_discrepancy(eta7);
  EXPECT_EQ(d.exact, Rational(1, 5));
  EXPECT_DOUBLE_EQ(d.approx, 0.2);
  expect_witness_reproduces(eta7, d);
}

TEST(StarDiscrepancyTest, Errors) {
  EXPECT_THROW(star_discrepancy({}), std::invalid_argument);
  EXPECT_THROW(star_discrepancy_oracle({}), std::invalid_argument);
  EXPECT_THROW(prefix_scan({}), std::invalid_argument);
  // Denominator times point count beyond 2^63.
  const std::int64_t huge = std::int64_t{1} << 62;
  const auto pts = fr({{1, huge}, {3, huge}});
  EXPECT_THROW(star_discrepancy(pts), CapacityError);
  EXPECT_THROW(star_discrepancy_oracle(pts), CapacityError);
}

// First 30 eta prefixes, frozen from an exact brute force over Python fractions.
TEST(StarDiscrepancyTest, EtaPrefixesFrozen) {
  const std::vector<std::string> expected = {
      "1/2",   "1/2",    "1/3",    "1/3",   "1/3",    "1/3",    "1/5",    "5/24",
      "2/9",   "1/5",    "1/5",    "17/84", "1/7",    "1/7",    "16/105", "9/56",
      "20/119", "1/7",   "1/7",    "1/7",   "1/7",    "1/7",    "16/161", "7/66",
      "31/275", "17/143", "32/297", "17/154", "22/203", "23/210"};
  std::vector<Fraction> eta;
  for (std::int64_t p : {2, 3, 5, 7, 11, 13})
    for (std::int64_t j = 1; j < p; ++j) eta.emplace_back(oracle::inverse_by_search(j, p), p);
  for (std::size_t n = 1; n <= expected.size(); ++n) {
    const std::span<const Fraction> prefix(eta.data(), n);
    EXPECT_EQ(star_discrepancy(prefix).exact.to_string(), expected[n - 1]) << n;
  }
}

TEST(StarDiscrepancyTest, AgreesWithOracles) {
  std::mt19937_64 rng(20240601);
  for (int trial = 0; trial < 300; ++trial) {
    const auto pts = random_points(rng, 200, 1000);
    const auto fast = star_discrepancy(pts);
    const auto slow = star_discrepancy_oracle(pts);
    ASSERT_EQ(fast.exact, slow.exact) << trial;
    expect_witness_reproduces(pts, fast);
    expect_witness_reproduces(pts, slow);
    ASSERT_GE(fast.exact, Rational(1, 2 * static_cast<std::int64_t>(pts.size())));
    ASSERT_LE(fast.exact, Rational(1));
  }
  // Small denominators: also against the threshold-grid oracle.
  for (int trial = 0; trial < 200; ++trial) {
    const auto pts = random_points(rng, 30, 12);
    ASSERT_EQ(star_discrepancy(pts).exact, oracle::grid_discrepancy(pts)) << trial;
  }
}

TEST(StarDiscrepancyTest, PermutationInvariant) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    auto pts = random_points(rng, 100, 500);
    const auto before = star_discrepancy(pts).exact;
    std::shuffle(pts.begin(), pts.end(), rng);
    ASSERT_EQ(star_discrepancy(pts).exact, before);
  }
}

TEST(StarDiscrepancyTest, DuplicatesCountWithMultiplicity) {
  // {1/2, 2/4}: A(1/2) = 2, so the deviation at r = 1/2 is 1/2.
  EXPECT_EQ(star_discrepancy(fr({{1, 2}, {2, 4}})).exact, Rational(1, 2));
  EXPECT_EQ(star_discrepancy(fr({{1, 2}, {2, 4}})).exact,
            star_discrepancy_oracle(fr({{1, 2}, {2, 4}})).exact);
}

TEST(StarDiscrepancyTest, FullBlockIsOneOverP) {
  for (std::int64_t p = 2; p <= 3000; ++p) {
    if (!oracle::trial_division_prime(p)) continue;
    for (auto ordering : {Ordering::Inversive, Ordering::Increasing})
      ASSERT_EQ(star_discrepancy(generate_block({p, ordering})).exact, Rational(1, p));
  }
}

TEST(PrefixScanTest, Examples) {
  auto weighted = [](const std::vector<ScanRecord>& r) {
    std::vector<std::string> out;
    for (const auto& rec : r) out.push_back(rec.weighted.to_string());
    return out;
  };
  EXPECT_EQ(weighted(prefix_scan(generate_block({5, Ordering::Inversive}))),
            (std::vector<std::string>{"4/5", "4/5", "6/5", "4/5"}));
  EXPECT_EQ(weighted(prefix_scan(generate_block({5, Ordering::Increasing}))),
            (std::vector<std::string>{"4/5", "6/5", "6/5", "4/5"}));
  const auto single = prefix_scan(fr({{1, 2}}));
  ASSERT_EQ(single.size(), 1u);
  EXPECT_EQ(single[0].k, 1u);
  EXPECT_EQ(single[0].disc.exact, Rational(1, 2));
  EXPECT_EQ(single[0].weighted, Rational(1, 2));
}

TEST(PrefixScanTest, BothPathsMatchOraclePerPrefix) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<Fraction> pts;
    if (trial % 2 == 0) {
      // Common denominator, duplicates allowed.
      const std::int64_t q = std::uniform_int_distribution<std::int64_t>(2, 40)(rng);
      const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 60)(rng);
      for (std::size_t i = 0; i < n; ++i)
        pts.emplace_back(std::uniform_int_distribution<std::int64_t>(1, q - 1)(rng), q);
    } else {
      pts = random_points(rng, 60, 50);
    }
    const auto records = prefix_scan(pts);
    ASSERT_EQ(records.size(), pts.size());
    for (std::size_t k = 1; k <= pts.size(); ++k) {
      const std::span<const Fraction> prefix(pts.data(), k);
      const auto& rec = records[k - 1];
      ASSERT_EQ(rec.k, k);
      ASSERT_EQ(rec.disc.exact, star_discrepancy_oracle(prefix).exact) << trial << " k=" << k;
      ASSERT_EQ(rec.weighted, rec.disc.exact * Rational(static_cast<std::int64_t>(k)));
      ASSERT_EQ(evaluate_deviation(prefix, rec.disc.witness, rec.disc.side), rec.disc.exact);
    }
    ASSERT_EQ(records.back().disc.exact, star_discrepancy(pts).exact);
  }
}

TEST(BlockMaxWeightedTest, Examples) {
  const auto inv5 = block_max_weighted({5, Ordering::Inversive});
  EXPECT_EQ(inv5.weighted, Rational(6, 5));
  EXPECT_EQ(inv5.k, 3u);
  const auto inc5 = block_max_weighted({5, Ordering::Increasing});
  EXPECT_EQ(inc5.weighted, Rational(6, 5));
  EXPECT_EQ(inc5.k, 2u);
  // Increasing block p = 13: exact sweep gives 42/13 at k = 6, above (p-1)/8.
  const auto inc13 = block_max_weighted({13, Ordering::Increasing});
  EXPECT_EQ(inc13.weighted, Rational(42, 13));
  EXPECT_EQ(inc13.k, 6u);
  EXPECT_GE(inc13.weighted, Rational(3, 2));
  const auto inv13 = block_max_weighted({13, Ordering::Inversive});
  EXPECT_EQ(inv13.weighted, Rational(29, 13));
  EXPECT_EQ(inv13.k, 6u);
}

TEST(BlockMaxWeightedTest, SweepLimitAndValidation) {
  EXPECT_THROW(block_max_weighted({30011, Ordering::Inversive}), std::invalid_argument);
  EXPECT_THROW(block_max_weighted({101, Ordering::Inversive}, 100), std::invalid_argument);
  EXPECT_NO_THROW(block_max_weighted({101, Ordering::Inversive}, 101));
  EXPECT_THROW(block_max_weighted({9, Ordering::Inversive}), std::invalid_argument);
}

TEST(BlockMaxWeightedTest, AgreesWithPrefixScanAndProfile) {
  for (std::int64_t p : {2, 3, 7, 31, 97, 211}) {
    for (auto ordering : {Ordering::Inversive, Ordering::Increasing}) {
      const auto records = prefix_scan(generate_block({p, ordering}));
      const auto profile = block_weighted_profile({p, ordering});
      ASSERT_EQ(profile.size(), records.size());
      Rational best(-1);
      std::uint64_t best_k = 0;
      for (std::size_t i = 0; i < records.size(); ++i) {
        ASSERT_EQ(profile[i], records[i].weighted);
        if (records[i].weighted > best) {
          best = records[i].weighted;
          best_k = records[i].k;
        }
      }
      const auto max = block_max_weighted({p, ordering});
      EXPECT_EQ(max.weighted, best);
      EXPECT_EQ(max.k, best_k);
    }
  }
}

TEST(NwBoundTest, Examples) {
  EXPECT_NEAR(nw_bound(5, 4), 21.45381168354707, 1e-12);
  EXPECT_NEAR(nw_bound(2, 1), 4.533869120620327, 1e-12);
  EXPECT_THROW(nw_bound(5, 0), std::invalid_argument);
  EXPECT_THROW(nw_bound(5, 5), std::invalid_argument);
  EXPECT_THROW(nw_bound(6, 1), std::invalid_argument);
  for (std::int64_t k = 1; k < 96; ++k) EXPECT_LT(nw_bound(97, k), nw_bound(97, k + 1));
}

TEST(NwBoundTest, CertificateHoldsForSmallPrimes) {
  for (std::int64_t p = 2; p <= 500; ++p) {
    if (!oracle::trial_division_prime(p)) continue;
    const auto profile = block_weighted_profile({p, Ordering::Inversive});
    for (std::size_t k = 1; k <= profile.size(); ++k)
      ASSERT_LE(profile[k - 1].to_double(), nw_bound(p, static_cast<std::int64_t>(k)));
  }
}

TEST(TriangleBoundTest, Examples) {
  const std::vector<std::vector<Fraction>> e3e5 = {generate_block({3, Ordering::Inversive}),
                                                   generate_block({5, Ordering::Inversive})};
  const auto tb = triangle_bound(e3e5);
  EXPECT_EQ(tb.bound, BigRational(11, 45));
  EXPECT_TRUE(tb.holds());
  EXPECT_EQ(tb.exact.exact, Rational(1, 5));

  const std::vector<std::vector<Fraction>> single = {fr({{1, 7}, {5, 7}, {2, 7}})};
  const auto one = triangle_bound(single);
  EXPECT_EQ(one.bound, to_big(one.exact.exact));

  const std::vector<std::vector<Fraction>> eta7 = {generate_block({2, Ordering::Inversive}),
                                                   generate_block({3, Ordering::Inversive}),
                                                   generate_block({5, Ordering::Inversive})};
  const auto t7 = triangle_bound(eta7);
  EXPECT_EQ(t7.exact.exact, Rational(1, 5));
  EXPECT_TRUE(t7.holds());

  EXPECT_THROW(triangle_bound(std::vector<std::vector<Fraction>>{}), std::invalid_argument);
  EXPECT_THROW(triangle_bound(std::vector<std::vector<Fraction>>{{}}), std::invalid_argument);
}

TEST(TriangleBoundTest, RandomConcatenations) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::vector<Fraction>> blocks(
        std::uniform_int_distribution<std::size_t>(1, 6)(rng));
    for (auto& b : blocks) b = random_points(rng, 25, 40);
    const auto tb = triangle_bound(blocks);
    ASSERT_TRUE(tb.holds());
  }
}

TEST(TriangleBoundTest, ManyDistinctDenominatorsStayExact) {
  // Ten inversive blocks with distinct primes: the bound's denominator is far
  // beyond 64 bits.
  std::vector<std::vector<Fraction>> blocks;
  for (std::int64_t p : {419, 421, 431, 433, 439, 443, 449, 457, 461, 463}) {
    auto b = generate_block({p, Ordering::Inversive});
    b.resize(static_cast<std::size_t>(p / 3));
    blocks.push_back(std::move(b));
  }
  const auto tb = triangle_bound(blocks);
  EXPECT_GT(boost::multiprecision::denominator(tb.bound),
            boost::multiprecision::cpp_int(std::numeric_limits<std::int64_t>::max()));
  EXPECT_TRUE(tb.holds());
}

TEST(IncrementalDiscrepancyTest, MatchesBatchAfterEveryAppend) {
  std::mt19937_64 rng(3);
  IncrementalDiscrepancy inc;
  std::vector<Fraction> all;
  for (int step = 0; step < 40; ++step) {
    const auto chunk = random_points(rng, 30, 300);
    inc.append(chunk);
    all.insert(all.end(), chunk.begin(), chunk.end());
    ASSERT_EQ(inc.size(), all.size());
    ASSERT_TRUE(std::is_sorted(inc.sorted().begin(), inc.sorted().end()));
    const auto d = inc.discrepancy();
    ASSERT_EQ(d.exact, star_discrepancy(all).exact);
    ASSERT_EQ(evaluate_deviation(all, d.witness, d.side), d.exact);
  }
  EXPECT_THROW(IncrementalDiscrepancy{}.discrepancy(), std::invalid_argument);
}
