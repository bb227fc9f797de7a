#include <gtest/gtest.h>

#include <random>

#include "stats.hpp"
#include "warplda/alias_table.hpp"
#include "warplda/rng.hpp"

using namespace warplda;
using warplda::testing::chi_square_pvalue;
using warplda::testing::tv_distance;

TEST(AliasTable, SingleOutcome) {
  const std::vector<std::pair<std::uint32_t, double>> w{{7, 3.0}};
  AliasTable t(w);
  EXPECT_EQ(t.bin_count(), 1u);
  std::mt19937_64 rng(1);
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(alias_draw(t, rng), 7u);
}

TEST(AliasTable, TwoOutcomes) {
  const std::vector<std::pair<std::uint32_t, double>> w{{0, 1.0}, {1, 3.0}};
  AliasTable t(w);
  std::mt19937_64 rng(2);
  int ones = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) ones += alias_draw(t, rng) == 1;
  EXPECT_NEAR(ones / double(n), 0.75, 0.01);
}

TEST(AliasTable, ImpliedProbabilitiesAreExact) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> counts;
    double total = 0;
    for (std::uint32_t k = 0; k < 1 + rng() % 200; ++k) {
      if (rng() % 2) continue;
      counts.emplace_back(k, 1 + rng() % 1000);
      total += counts.back().second;
    }
    if (counts.empty()) continue;
    AliasTable t;
    t.rebuild(std::span<const std::pair<std::uint32_t, std::uint32_t>>(counts));
    EXPECT_EQ(t.bin_count(), counts.size());
    EXPECT_DOUBLE_EQ(t.total_weight(), total);
    const auto implied = t.implied_probabilities();
    ASSERT_EQ(implied.size(), counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) {
      EXPECT_EQ(implied[i].first, counts[i].first);
      EXPECT_NEAR(implied[i].second, counts[i].second / total, 1e-12);
    }
  }
}

TEST(AliasTable, ThousandRandomWeightsTv) {
  std::mt19937_64 rng(4);
  // Wide dynamic range, as topic counts have. Near-uniform weights over 1000
  // outcomes put the sampling-noise floor of TV at 10^6 draws above 0.01.
  std::lognormal_distribution<double> u(0.0, 3.0);
  std::vector<std::pair<std::uint32_t, double>> w;
  std::vector<double> exact;
  for (std::uint32_t k = 0; k < 1000; ++k) {
    w.emplace_back(k, u(rng));
    exact.push_back(w.back().second);
  }
  exact = warplda::testing::normalized(exact);
  AliasTable t(w);
  std::vector<std::uint64_t> hist(1000, 0);
  for (int i = 0; i < 1000000; ++i) ++hist[alias_draw(t, rng)];
  EXPECT_LE(tv_distance(hist, exact), 0.01);
}

TEST(AliasTable, ChiSquareTenOutcomes) {
  std::vector<std::pair<std::uint32_t, double>> w;
  std::vector<double> exact;
  for (std::uint32_t k = 0; k < 10; ++k) {
    w.emplace_back(k, 1.0 + k * k);
    exact.push_back(1.0 + k * k);
  }
  exact = warplda::testing::normalized(exact);
  AliasTable t(w);
  KeyedStream g(RngKey{99, 0, Phase::kInit, 0, Purpose::kAssign, 0, 0});
  std::vector<std::uint64_t> hist(10, 0);
  for (int i = 0; i < 1000000; ++i) {
    ++hist[t.draw(rng_at(RngKey{99, 0, Phase::kInit, static_cast<std::uint64_t>(i), Purpose::kAssign, 0, 0}),
                  rng_at(RngKey{99, 0, Phase::kInit, static_cast<std::uint64_t>(i), Purpose::kAssign, 0, 1}))];
  }
  EXPECT_GT(chi_square_pvalue(hist, exact), 0.001);
}

TEST(AliasTable, DeterministicAndFixedConsumption) {
  const std::vector<std::pair<std::uint32_t, double>> w{{2, 1.0}, {5, 2.0}, {9, 0.5}};
  AliasTable t(w);
  KeyedStream a(RngKey{1, 2, Phase::kWord, 3, Purpose::kPropose, 0, 0});
  KeyedStream b(RngKey{1, 2, Phase::kWord, 3, Purpose::kPropose, 0, 0});
  for (int i = 0; i < 100; ++i) EXPECT_EQ(alias_draw(t, a), alias_draw(t, b));
  EXPECT_EQ(a.consumed(), 200);
}

TEST(AliasTable, RejectsBadInput) {
  AliasTable t;
  EXPECT_THROW(t.rebuild(std::span<const std::pair<std::uint32_t, double>>()), std::invalid_argument);
  const std::vector<std::pair<std::uint32_t, double>> zero{{0, 1.0}, {1, 0.0}};
  EXPECT_THROW(t.rebuild(zero), std::invalid_argument);
  const std::vector<std::pair<std::uint32_t, double>> neg{{0, -1.0}};
  EXPECT_THROW(t.rebuild(neg), std::invalid_argument);
  const std::vector<std::pair<std::uint32_t, double>> inf{{0, std::numeric_limits<double>::infinity()}};
  EXPECT_THROW(t.rebuild(inf), std::invalid_argument);
}
