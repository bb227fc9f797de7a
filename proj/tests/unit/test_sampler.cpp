#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "stats.hpp"
#include "warplda/baseline.hpp"
#include "warplda/error.hpp"
#include "warplda/rng.hpp"
#include "warplda/sampler.hpp"
#include "warplda/synthetic.hpp"

using namespace warplda;
using warplda::testing::tv_distance;

namespace {

TrainConfig config(std::uint32_t K, std::uint32_t M, std::uint64_t seed = 11) {
  auto cfg = TrainConfig::with_defaults(K, 1);
  cfg.mh_steps = M;
  cfg.seed = seed;
  return cfg;
}

Corpus small_corpus(std::uint64_t seed = 5) { return generate_zipf_corpus(40, 25, 60, 1.0, seed); }

void expect_equal_to_oracle(const Corpus& c, const TokenMatrix& m, const NaiveMcemState& s, const std::string& where) {
  std::uint64_t mismatches = 0;
  for (std::uint64_t g = 0; g < c.token_total(); ++g) {
    const auto e = m.entry(s.store_offset[g]);
    mismatches += e[kAssignmentWord] != s.z[g];
    for (std::uint32_t i = 0; i < s.mh_steps; ++i) mismatches += e[proposal_word(i)] != s.proposals_of(g)[i];
  }
  EXPECT_EQ(mismatches, 0u) << where;
}

}  // namespace

TEST(MhAccept, IdentityProposalAlwaysAccepted) {
  SparseCounts c(4, 1);
  c.increment(2);
  const std::vector<std::int64_t> ck{0, 0, 1, 0};
  const Smoothing s{0.1, 0.01, 0.04};
  EXPECT_EQ(mh_accept(2, 2, ProposalKind::kDoc, c, ck, s, 0.999999), 2u);
}

TEST(MhAccept, RatioAboveOneAlwaysAccepts) {
  SparseCounts cw(3, 5);
  for (int i = 0; i < 2; ++i) cw.increment(1);
  for (int i = 0; i < 3; ++i) cw.increment(2);
  const std::vector<std::int64_t> ck{0, 10, 5};
  const Smoothing s{1.0, 1.0, 2.0};
  // (3+1)/(2+1) · (10+2)/(5+2) = 16/7
  for (double u : {0.0, 0.5, 0.999999}) EXPECT_EQ(mh_accept(1, 2, ProposalKind::kDoc, cw, ck, s, u), 2u);
}

TEST(MhAccept, SwappedAcceptsWithProbabilitySevenSixteenths) {
  SparseCounts cw(3, 5);
  for (int i = 0; i < 2; ++i) cw.increment(1);
  for (int i = 0; i < 3; ++i) cw.increment(2);
  const std::vector<std::int64_t> ck{0, 10, 5};
  const Smoothing s{1.0, 1.0, 2.0};
  EXPECT_EQ(mh_accept(2, 1, ProposalKind::kDoc, cw, ck, s, 0.4374), 1u);
  EXPECT_EQ(mh_accept(2, 1, ProposalKind::kDoc, cw, ck, s, 0.4376), 2u);
  std::mt19937_64 rng(1);
  int accepted = 0;
  for (int i = 0; i < 100000; ++i) accepted += mh_accept(2, 1, ProposalKind::kDoc, cw, ck, s, uniform01(rng())) == 1;
  EXPECT_NEAR(accepted / 1e5, 7.0 / 16.0, 0.005);
}

TEST(MhAccept, WordKindUsesAlpha) {
  SparseCounts cd(2, 1);
  cd.increment(0);
  const std::vector<std::int64_t> ck{4, 4};
  const Smoothing s{0.5, 100.0, 3.0};
  // (0+0.5)/(1+0.5) · 1 = 1/3
  EXPECT_EQ(mh_accept(0, 1, ProposalKind::kWord, cd, ck, s, 0.333), 1u);
  EXPECT_EQ(mh_accept(0, 1, ProposalKind::kWord, cd, ck, s, 0.334), 0u);
}

TEST(Init, SingleTopicIsAllZero) {
  auto m = build_token_matrix(small_corpus(), 2);
  init_assignments(m, config(1, 2));
  for (auto v : m.payload()) EXPECT_EQ(v, 0u);
}

TEST(Init, DeterministicGivenSeed) {
  const auto c = small_corpus();
  auto a = build_token_matrix(c, 3), b = build_token_matrix(c, 3), d = build_token_matrix(c, 3);
  init_assignments(a, config(20, 3, 1));
  init_assignments(b, config(20, 3, 1));
  init_assignments(d, config(20, 3, 2));
  EXPECT_EQ(a, b);
  EXPECT_NE(a, d);
}

TEST(Init, TopicFrequenciesWithinFiveSigma) {
  TokenMatrixBuilder builder(1000, 1000, 2);
  const std::vector<std::uint32_t> blank{0, 0};
  for (std::uint32_t i = 0; i < 1000000; ++i) builder.add_entry(i % 1000, (i / 1000) % 1000, blank);
  auto m = std::move(builder).finalize();
  init_assignments(m, config(100, 1));
  const auto totals = topic_totals(m, 100);
  const double mean = 1e6 / 100, sigma = std::sqrt(1e6 * 0.01 * 0.99);
  for (auto t : totals) EXPECT_NEAR(static_cast<double>(t), mean, 5 * sigma);
}

TEST(Phases, SingleTopicIsNoOp) {
  const auto c = small_corpus();
  const auto cfg = config(1, 2);
  auto m = build_token_matrix(c, 2);
  init_assignments(m, cfg);
  GlobalState g(1, m.entry_total());
  g.publish(topic_totals(m, 1));
  const auto plan = m.single_worker();
  g.publish(word_phase(m, g, cfg, 1, plan));
  g.publish(document_phase(m, g, cfg, 1, plan));
  for (auto v : m.payload()) EXPECT_EQ(v, 0u);
  EXPECT_EQ(g.snapshot()[0], static_cast<std::int64_t>(c.token_total()));
}

TEST(Phases, MatchUnreorderedOracle) {
  for (std::uint32_t M : {1u, 2u, 3u}) {
    const auto c = small_corpus(M);
    const auto cfg = config(7, M, 100 + M);
    auto m = build_token_matrix(c, M);
    init_assignments(m, cfg);
    GlobalState g(cfg.topics, m.entry_total());
    g.publish(topic_totals(m, cfg.topics));
    auto oracle = naive_mcem_init(c, cfg);
    expect_equal_to_oracle(c, m, oracle, "init");
    EXPECT_EQ(std::vector<std::int64_t>(g.snapshot().begin(), g.snapshot().end()), oracle.topic_counts);

    const auto plan = m.single_worker();
    for (std::uint32_t it = 1; it <= 5; ++it) {
      g.publish(word_phase(m, g, cfg, it, plan));
      naive_mcem_word_phase(c, oracle, cfg, it);
      expect_equal_to_oracle(c, m, oracle, "word phase " + std::to_string(it));
      g.publish(document_phase(m, g, cfg, it, plan));
      naive_mcem_document_phase(c, oracle, cfg, it);
      expect_equal_to_oracle(c, m, oracle, "document phase " + std::to_string(it));
      EXPECT_EQ(std::vector<std::int64_t>(g.snapshot().begin(), g.snapshot().end()), oracle.topic_counts);
    }
  }
}

TEST(Phases, ConserveTokensAndKeepSnapshotImmutable) {
  const auto c = small_corpus();
  const auto cfg = config(9, 2);
  auto m = build_token_matrix(c, 2);
  init_assignments(m, cfg);
  GlobalState g(cfg.topics, m.entry_total());
  g.publish(topic_totals(m, cfg.topics));
  const auto plan = m.balanced_plan(3);
  for (std::uint32_t it = 1; it <= 4; ++it) {
    const std::vector<std::int64_t> before(g.snapshot().begin(), g.snapshot().end());
    auto next = word_phase(m, g, cfg, it, plan);
    EXPECT_EQ(std::vector<std::int64_t>(g.snapshot().begin(), g.snapshot().end()), before);
    EXPECT_EQ(next, topic_totals(m, cfg.topics));
    g.publish(std::move(next));
    next = document_phase(m, g, cfg, it, plan);
    EXPECT_EQ(next, topic_totals(m, cfg.topics));
    g.publish(std::move(next));
    EXPECT_NO_THROW(collect_counts(m, cfg.topics).check_consistent());
    for (auto v : m.payload()) ASSERT_LT(v, cfg.topics);
  }
}

TEST(GlobalState, PublishChecksTotal) {
  GlobalState g(3, 10);
  EXPECT_THROW(g.publish({1, 2, 3}), InconsistentCounts);
  EXPECT_THROW(g.publish({5, 5}), InconsistentCounts);
  EXPECT_NO_THROW(g.publish({5, 5, 0}));
}

namespace {

// Tiny fixed corpus: 5 words, 4 documents.
Corpus toy_corpus() {
  return Corpus({{0, 1, 1, 2}, {2, 3, 4, 4, 0}, {1, 3}, {0, 0, 4, 2, 3}}, {"a", "b", "c", "d", "e"});
}

}  // namespace

TEST(Phases, WordProposalsFollowQWord) {
  const auto c = toy_corpus();
  const std::uint32_t K = 3, V = c.vocab_size();
  std::vector<std::vector<std::uint64_t>> hist(V, std::vector<std::uint64_t>(K, 0));
  std::vector<std::vector<double>> expected(V, std::vector<double>(K, 0.0));
  for (std::uint64_t rep = 0; rep < 100000; ++rep) {
    auto cfg = config(K, 2, rep);
    cfg.beta = 0.4;
    auto m = build_token_matrix(c, 2);
    init_assignments(m, cfg);
    GlobalState g(K, m.entry_total());
    g.publish(topic_totals(m, K));
    word_phase(m, g, cfg, 1, m.single_worker());
    for (std::uint32_t w = 0; w < V; ++w) {
      auto col = m.column(w);
      std::vector<double> q(K, cfg.beta);
      for (std::uint32_t i = 0; i < col.size(); ++i) q[col.data(i)[kAssignmentWord]] += 1.0;
      q = warplda::testing::normalized(q);
      for (std::uint32_t i = 0; i < col.size(); ++i) {
        for (std::uint32_t j = 0; j < 2; ++j) {
          ++hist[w][col.data(i)[proposal_word(j)]];
          for (std::uint32_t k = 0; k < K; ++k) expected[w][k] += q[k];
        }
      }
    }
  }
  for (std::uint32_t w = 0; w < V; ++w) {
    EXPECT_LE(tv_distance(hist[w], warplda::testing::normalized(expected[w])), 0.02) << "word " << w;
  }
}

TEST(Phases, DocProposalsFollowQDoc) {
  const auto c = toy_corpus();
  const std::uint32_t K = 3, D = c.doc_count();
  std::vector<std::vector<std::uint64_t>> hist(D, std::vector<std::uint64_t>(K, 0));
  std::vector<std::vector<double>> expected(D, std::vector<double>(K, 0.0));
  for (std::uint64_t rep = 0; rep < 100000; ++rep) {
    auto cfg = config(K, 2, rep);
    cfg.alpha = 0.6;
    auto m = build_token_matrix(c, 2);
    init_assignments(m, cfg);
    GlobalState g(K, m.entry_total());
    g.publish(topic_totals(m, K));
    document_phase(m, g, cfg, 1, m.single_worker());
    for (std::uint32_t d = 0; d < D; ++d) {
      auto row = m.row(d);
      std::vector<double> q(K, cfg.alpha);
      for (std::uint32_t i = 0; i < row.size(); ++i) q[row.data(i)[kAssignmentWord]] += 1.0;
      q = warplda::testing::normalized(q);
      for (std::uint32_t i = 0; i < row.size(); ++i) {
        for (std::uint32_t j = 0; j < 2; ++j) {
          ++hist[d][row.data(i)[proposal_word(j)]];
          for (std::uint32_t k = 0; k < K; ++k) expected[d][k] += q[k];
        }
      }
    }
  }
  for (std::uint32_t d = 0; d < D; ++d) {
    EXPECT_LE(tv_distance(hist[d], warplda::testing::normalized(expected[d])), 0.02) << "doc " << d;
  }
}

TEST(Trainer, SingleTopicClosedForm) {
  const auto c = toy_corpus();
  auto cfg = TrainConfig::with_defaults(1, 1);
  const auto model = train(c, cfg);
  for (std::uint32_t d = 0; d < c.doc_count(); ++d) EXPECT_DOUBLE_EQ(model.doc_topic_row(d)[0], 1.0);
  const auto tf = c.term_frequencies();
  const double T = static_cast<double>(c.token_total()), V = c.vocab_size();
  for (std::uint32_t w = 0; w < c.vocab_size(); ++w) {
    EXPECT_NEAR(model.phi(0, w), (tf[w] + cfg.beta) / (T + V * cfg.beta), 1e-15);
  }
}

TEST(Trainer, RejectsBadConfig) {
  const auto c = toy_corpus();
  auto cfg = TrainConfig::with_defaults(4, 0);
  EXPECT_THROW(Trainer(c, cfg), std::invalid_argument);
  cfg.iterations = 1;
  cfg.mh_steps = 0;
  EXPECT_THROW(Trainer(c, cfg), std::invalid_argument);
  cfg.mh_steps = 2;
  cfg.alpha = 0;
  EXPECT_THROW(Trainer(c, cfg), std::invalid_argument);
}

TEST(Trainer, DeterministicAcrossRunsAndThreads) {
  const auto c = generate_zipf_corpus(200, 50, 300, 1.0, 3);
  auto cfg = TrainConfig::with_defaults(16, 5);
  cfg.seed = 77;
  const auto reference = train(c, cfg);
  EXPECT_EQ(train(c, cfg), reference);
  for (std::uint32_t threads : {2u, 4u, 8u}) {
    cfg.threads = threads;
    EXPECT_EQ(train(c, cfg), reference) << threads << " threads";
  }
}

TEST(Trainer, MemoryEstimateScalesWithM) {
  EXPECT_GT(estimated_training_bytes(1000, 4), estimated_training_bytes(1000, 1));
  EXPECT_EQ(estimated_training_bytes(0, 2), 0u);
}
