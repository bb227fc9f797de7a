#include <gtest/gtest.h>

#include <random>

#include "stats.hpp"
#include "warplda/proposals.hpp"

using namespace warplda;
using warplda::testing::tv_distance;

namespace {

std::vector<double> q_doc(const std::vector<std::uint32_t>& z, double alpha, std::uint32_t K) {
  std::vector<double> p(K, alpha);
  for (auto t : z) p[t] += 1.0;
  return warplda::testing::normalized(p);
}

std::vector<double> q_word(const SparseCounts& c, double beta, std::uint32_t K) {
  std::vector<double> p(K, beta);
  for (std::uint32_t k = 0; k < K; ++k) p[k] += c.get(k);
  return warplda::testing::normalized(p);
}

AliasTable alias_over(const SparseCounts& c) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> e;
  c.sorted_entries(e);
  AliasTable t;
  t.rebuild(std::span<const std::pair<std::uint32_t, std::uint32_t>>(e));
  return t;
}

}  // namespace

TEST(DocProposal, ZeroAlphaCopiesRow) {
  const std::vector<std::uint32_t> z{2, 2, 2, 2};
  std::mt19937_64 rng(1);
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(draw_doc_proposal(z, 0.0, 5, rng), 2u);
}

TEST(DocProposal, MixtureProbability) {
  const std::vector<std::uint32_t> z{0};
  std::mt19937_64 rng(2);
  int zeros = 0;
  for (int i = 0; i < 100000; ++i) zeros += draw_doc_proposal(z, 0.5, 2, rng) == 0;
  EXPECT_NEAR(zeros / 1e5, 0.75, 0.01);
}

TEST(DocProposal, LargeAlphaIsUniform) {
  const std::vector<std::uint32_t> z{1, 1, 3, 0, 1};
  std::mt19937_64 rng(3);
  std::vector<std::uint64_t> hist(4, 0);
  for (int i = 0; i < 100000; ++i) ++hist[draw_doc_proposal(z, 1e6, 4, rng)];
  EXPECT_LE(tv_distance(hist, std::vector<double>(4, 0.25)), 0.02);
}

TEST(DocProposal, ConsumesTwoValuesAndRejectsEmptyRow) {
  const std::vector<std::uint32_t> z{1, 2};
  KeyedStream g(RngKey{});
  draw_doc_proposal(z, 0.1, 3, g);
  EXPECT_EQ(g.consumed(), 2);
  EXPECT_THROW(draw_doc_proposal(std::span<const std::uint32_t>(), 0.1, 3, g), std::invalid_argument);
}

TEST(DocProposal, MatchesExactLaw) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 5; ++trial) {
    const std::uint32_t K = 2 + rng() % 20;
    std::vector<std::uint32_t> z(1 + rng() % 40);
    for (auto& t : z) t = rng() % K;
    const double alpha = 0.05 + (rng() % 100) / 50.0;
    std::vector<std::uint64_t> hist(K, 0);
    for (int i = 0; i < 1000000; ++i) ++hist[draw_doc_proposal(z, alpha, K, rng)];
    EXPECT_LE(tv_distance(hist, q_doc(z, alpha, K)), 0.01);
  }
}

TEST(WordProposal, ZeroBetaUsesAlias) {
  SparseCounts c(8, 3);
  for (int i = 0; i < 3; ++i) c.increment(5);
  const auto t = alias_over(c);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(draw_word_proposal(c, 3, 0.0, 8, t, rng), 5u);
}

TEST(WordProposal, MixtureProbability) {
  SparseCounts c(2, 2);
  c.increment(0);
  c.increment(0);
  const auto t = alias_over(c);
  std::mt19937_64 rng(6);
  int zeros = 0;
  for (int i = 0; i < 100000; ++i) zeros += draw_word_proposal(c, 2, 1.0, 2, t, rng) == 0;
  EXPECT_NEAR(zeros / 1e5, 0.75, 0.01);
}

TEST(WordProposal, MatchesExactLaw) {
  std::mt19937_64 rng(7);
  const std::uint32_t K = 16;
  SparseCounts c(K, 60);
  for (int i = 0; i < 60; ++i) c.increment(rng() % K);
  const auto t = alias_over(c);
  std::vector<std::uint64_t> hist(K, 0);
  for (int i = 0; i < 1000000; ++i) ++hist[draw_word_proposal(c, 60, 0.3, K, t, rng)];
  EXPECT_LE(tv_distance(hist, q_word(c, 0.3, K)), 0.01);
}

TEST(WordProposal, StaleAliasRejected) {
  SparseCounts c(4, 2);
  c.increment(1);
  c.increment(2);
  const auto t = alias_over(c);
  std::mt19937_64 rng(8);
  c.increment(3);
  EXPECT_THROW(draw_word_proposal(c, 3, 0.1, 4, t, rng), std::logic_error);
  EXPECT_THROW(draw_word_proposal(c, 0, 0.1, 4, t, rng), std::invalid_argument);
  KeyedStream g(RngKey{});
  c.decrement(3);
  draw_word_proposal(c, 2, 0.1, 4, t, g);
  EXPECT_EQ(g.consumed(), 3);
}

TEST(Proposals, MixtureWeightDecomposition) {
  // P(count component) = L / (L + K·smoothing): measured through the uniform
  // branch, which is the only source of topics absent from the row.
  const std::vector<std::uint32_t> z{0, 0, 0};
  const std::uint32_t K = 4;
  const double alpha = 0.75;  // K·alpha = 3 = L, so half the draws are uniform
  std::mt19937_64 rng(9);
  int absent = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) absent += draw_doc_proposal(z, alpha, K, rng) != 0;
  // Uniform branch hits the 3 absent topics with probability 3/4.
  EXPECT_NEAR(absent / double(n), 0.5 * 0.75, 0.005);
}
