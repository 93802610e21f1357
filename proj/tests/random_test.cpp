#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>

#include "test_util.hpp"

namespace {

using namespace fastbin;

TEST(Gaussian, MomentsAtOneHundredThousand) {
  const std::size_t n = 100000;
  const RealVector g = gaussian_vector(SeedSpec{1, 0}, n);
  double mean = 0.0;
  for (double v : g) mean += v;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double v : g) var += (v - mean) * (v - mean);
  var /= static_cast<double>(n - 1);
  EXPECT_LE(std::abs(mean), 3.0 / std::sqrt(static_cast<double>(n)));
  EXPECT_GE(var, 0.97);
  EXPECT_LE(var, 1.03);
}

TEST(Gaussian, DeterministicPerSeedAndStream) {
  EXPECT_EQ(gaussian_vector(SeedSpec{7, 3}, 50), gaussian_vector(SeedSpec{7, 3}, 50));
  EXPECT_NE(gaussian_vector(SeedSpec{7, 3}, 50), gaussian_vector(SeedSpec{7, 4}, 50));
  EXPECT_NE(gaussian_vector(SeedSpec{7, 3}, 50), gaussian_vector(SeedSpec{8, 3}, 50));
  EXPECT_THROW(gaussian_vector(SeedSpec{}, 0), DimensionError);
}

TEST(Rademacher, SupportAndBalance) {
  const std::size_t n = 100000;
  const RealVector r = rademacher_vector(SeedSpec{2, 0}, n);
  std::size_t plus = 0;
  for (double v : r) {
    ASSERT_TRUE(v == 1.0 || v == -1.0);
    plus += v > 0;
  }
  EXPECT_LE(std::abs(static_cast<double>(plus) / static_cast<double>(n) - 0.5), 0.005);
  EXPECT_EQ(rademacher_vector(SeedSpec{2, 0}, 77), rademacher_vector(SeedSpec{2, 0}, 77));
  EXPECT_THROW(rademacher_vector(SeedSpec{}, 0), DimensionError);
}

TEST(UniformSubset, ForcedAndErrors) {
  const IndexSet all = uniform_subset(SeedSpec{3, 0}, 6, 6);
  EXPECT_EQ(all.one_based(), (std::vector<std::size_t>{1, 2, 3, 4, 5, 6}));
  EXPECT_THROW(uniform_subset(SeedSpec{}, 3, 4), DomainError);
  EXPECT_THROW(uniform_subset(SeedSpec{}, 3, 0), DomainError);
}

TEST(UniformSubset, SortedDistinct) {
  Rng rng(SeedSpec{4, 0});
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 1 + rng.below(50);
    const std::size_t m = 1 + rng.below(n);
    const IndexSet s = uniform_subset(rng, n, m);
    ASSERT_EQ(s.size(), m);
    for (std::size_t k = 1; k < m; ++k) EXPECT_LT(s.indices()[k - 1], s.indices()[k]);
    EXPECT_LT(s.indices().back(), n);
  }
}

TEST(UniformSubset, SingletonFrequencies) {
  Rng rng(SeedSpec{5, 0});
  std::vector<std::size_t> count(4, 0);
  const std::size_t T = 60000;
  for (std::size_t t = 0; t < T; ++t) ++count[uniform_subset(rng, 4, 1).indices()[0]];
  for (std::size_t c : count) EXPECT_NEAR(static_cast<double>(c) / T, 0.25, 0.006);
}

TEST(UniformSubset, PairFrequencies) {
  Rng rng(SeedSpec{6, 0});
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> count;
  const std::size_t T = 100000;
  for (std::size_t t = 0; t < T; ++t) {
    const IndexSet s = uniform_subset(rng, 5, 2);
    ++count[{s.indices()[0], s.indices()[1]}];
  }
  ASSERT_EQ(count.size(), 10u);
  for (const auto& [k, c] : count) EXPECT_NEAR(static_cast<double>(c) / T, 0.1, 0.003);
}

TEST(UniformSubset, NegativelyCorrelated) {
  Rng rng(SeedSpec{7, 0});
  const std::size_t n = 10, m = 4, T = 100000;
  std::size_t both = 0;
  for (std::size_t t = 0; t < T; ++t) {
    const IndexSet s = uniform_subset(rng, n, m);
    bool has2 = false, has7 = false;
    for (std::size_t i : s.indices()) {
      has2 = has2 || i == 2;
      has7 = has7 || i == 7;
    }
    both += has2 && has7;
  }
  const double p = static_cast<double>(both) / T;
  const double se = std::sqrt(p * (1 - p) / T);
  const double independent = (static_cast<double>(m) / n) * (static_cast<double>(m) / n);
  EXPECT_LE(p, independent + 3 * se);
  // Exact value m(m-1) / (n(n-1)) = 12/90.
  EXPECT_NEAR(p, 12.0 / 90.0, 4 * se);
}

TEST(Dyadic, Examples) {
  EXPECT_EQ(dyadic_set(8, 4).one_based(), (std::vector<std::size_t>{1, 2, 4, 8}));
  EXPECT_EQ(dyadic_set(1, 1).one_based(), (std::vector<std::size_t>{1}));
  EXPECT_THROW(dyadic_set(4, 4), DomainError);
  EXPECT_THROW(dyadic_set(4, 0), DomainError);
  EXPECT_NO_THROW(dyadic_set(4, 3));
}

TEST(Sjlt, ExactlySDistinctPerColumn) {
  Rng pick(SeedSpec{8, 0});
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t n = 1 + pick.below(40), nprime = 1 + pick.below(30);
    const std::size_t s = 1 + pick.below(nprime);
    const SjltPattern p = sjlt_pattern(SeedSpec{8, static_cast<std::uint64_t>(rep + 1)}, n, nprime, s);
    for (std::size_t j = 0; j < n; ++j) {
      const auto rows = p.column_rows(j);
      const std::set<std::uint32_t> distinct(rows.begin(), rows.end());
      EXPECT_EQ(distinct.size(), s);
      EXPECT_LT(*distinct.rbegin(), nprime);
      for (auto sg : p.column_signs(j)) EXPECT_TRUE(sg == 1 || sg == -1);
    }
  }
  EXPECT_THROW(sjlt_pattern(SeedSpec{}, 4, 3, 4), DomainError);
}

TEST(Sjlt, FullSparsityIsDense) {
  const SjltPattern p = sjlt_pattern(SeedSpec{9, 0}, 12, 5, 5);
  for (std::size_t j = 0; j < 12; ++j) {
    const auto rows = p.column_rows(j);
    EXPECT_EQ(std::set<std::uint32_t>(rows.begin(), rows.end()).size(), 5u);
  }
  EXPECT_DOUBLE_EQ(p.scale(), 1.0 / std::sqrt(5.0));
}

TEST(Sjlt, RowFrequencies) {
  const SjltPattern p = sjlt_pattern(SeedSpec{10, 0}, 40000, 4, 1);
  std::vector<std::size_t> count(4, 0);
  std::size_t plus = 0;
  for (std::size_t j = 0; j < 40000; ++j) {
    ++count[p.column_rows(j)[0]];
    plus += p.column_signs(j)[0] > 0;
  }
  for (std::size_t c : count) EXPECT_NEAR(c / 40000.0, 0.25, 0.007);
  EXPECT_NEAR(plus / 40000.0, 0.5, 0.0075);
}

TEST(Seed, ParseDecimalAndHex) {
  EXPECT_EQ(parse_seed("12345"), 12345u);
  EXPECT_EQ(parse_seed("0x5eed"), 0x5eedu);
  EXPECT_EQ(parse_seed("0XFF"), 255u);
  EXPECT_EQ(parse_seed("18446744073709551615"), ~std::uint64_t{0});
  for (const char* bad : {"", "-1", "+3", "0x", "12a", "0xzz", "99999999999999999999"}) {
    EXPECT_THROW(parse_seed(bad), std::invalid_argument) << bad;
  }
}

TEST(Seed, TrialStreamsAreInjective) {
  std::set<std::pair<std::uint64_t, std::uint64_t>> seen;
  for (std::uint64_t e = 0; e < 20; ++e) {
    for (std::uint64_t t = 0; t < 50; ++t) {
      const SeedSpec s = trial_seed(1, e, t);
      EXPECT_TRUE(seen.insert({s.master, s.stream}).second);
    }
  }
  EXPECT_THROW(trial_seed(1, std::uint64_t{1} << 24, 0), std::invalid_argument);
  EXPECT_THROW(trial_seed(1, 0, std::uint64_t{1} << 40), std::invalid_argument);
}

TEST(Seed, ForkIsDeterministicAndDistinct) {
  const SeedSpec base{42, 7};
  EXPECT_EQ(base.fork(1).stream, base.fork(1).stream);
  EXPECT_NE(base.fork(1).stream, base.fork(2).stream);
  EXPECT_NE(gaussian_vector(base.fork(1), 8), gaussian_vector(base.fork(2), 8));
}

TEST(Rng, BelowIsUniform) {
  Rng rng(SeedSpec{11, 0});
  std::vector<std::size_t> count(7, 0);
  const std::size_t T = 70000;
  for (std::size_t t = 0; t < T; ++t) ++count[rng.below(7)];
  const double sd = std::sqrt(T * (1.0 / 7) * (6.0 / 7));
  for (std::size_t c : count) EXPECT_NEAR(static_cast<double>(c), T / 7.0, 4 * sd);
}

}  // namespace
