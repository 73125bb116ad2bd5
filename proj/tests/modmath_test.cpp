#include <gtest/gtest.h>

#include <vector>

#include "oracles.hpp"
#include "primedisc/modmath.hpp"

using primedisc::is_prime;
using primedisc::mod_inverse;

TEST(ModInverseTest, SmallCases) {
  EXPECT_EQ(mod_inverse(1, 5), 1);
  EXPECT_EQ(mod_inverse(2, 5), 3);
  EXPECT_EQ(mod_inverse(6, 7), 6);
}

TEST(ModInverseTest, Errors) {
  EXPECT_THROW(mod_inverse(0, 7), std::invalid_argument);
  EXPECT_THROW(mod_inverse(14, 7), std::invalid_argument);
  EXPECT_THROW(mod_inverse(1, 1), std::invalid_argument);
  EXPECT_THROW(mod_inverse(1, 0), std::invalid_argument);
  EXPECT_THROW(mod_inverse(2, 4), std::invalid_argument);
}

TEST(ModInverseTest, AgreesWithExhaustiveSearch) {
  for (std::int64_t p : {2, 3, 5, 7, 11, 101, 997})
    for (std::int64_t j = 1; j < p; ++j)
      EXPECT_EQ(mod_inverse(j, p), oracle::inverse_by_search(j, p)) << j << " mod " << p;
}

// Involution, bijection and certificate for every prime up to 10^4.
TEST(ModInverseTest, InvolutionBijectionCertificate) {
  for (std::int64_t p = 2; p <= 10000; ++p) {
    if (!oracle::trial_division_prime(p)) continue;
    std::vector<bool> seen(static_cast<std::size_t>(p), false);
    for (std::int64_t j = 1; j < p; ++j) {
      const std::int64_t v = mod_inverse(j, p);
      ASSERT_GE(v, 1);
      ASSERT_LE(v, p - 1);
      ASSERT_EQ(j * v % p, 1);
      ASSERT_EQ(mod_inverse(v, p), j);
      ASSERT_FALSE(seen[static_cast<std::size_t>(v)]);
      seen[static_cast<std::size_t>(v)] = true;
    }
  }
}

TEST(IsPrimeTest, MatchesTrialDivision) {
  for (std::int64_t n = 0; n < 20000; ++n)
    ASSERT_EQ(is_prime(static_cast<std::uint64_t>(n)), oracle::trial_division_prime(n)) << n;
}

TEST(IsPrimeTest, LargeValues) {
  EXPECT_TRUE(is_prime(1000000007ULL));
  EXPECT_TRUE(is_prime(18446744073709551557ULL));  // largest 64-bit prime
  EXPECT_FALSE(is_prime(3215031751ULL));           // strong pseudoprime to 2,3,5,7
  EXPECT_FALSE(is_prime(1000000007ULL * 998244353ULL));
}
