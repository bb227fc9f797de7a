#include "warplda/sampler.hpp"

#include <chrono>
#include <new>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "warplda/alias_table.hpp"
#include "warplda/checkpoint.hpp"
#include "warplda/error.hpp"
#include "warplda/likelihood.hpp"
#include "warplda/proposals.hpp"
#include "warplda/rng.hpp"

namespace warplda {

TokenMatrix build_token_matrix(const Corpus& corpus, std::uint32_t mh_steps) {
  TokenMatrixBuilder builder(corpus.doc_count(), corpus.vocab_size(), mh_steps + 1);
  builder.reserve(corpus.token_total());
  const std::vector<std::uint32_t> blank(mh_steps + 1, 0);
  for (std::uint32_t d = 0; d < corpus.doc_count(); ++d) {
    for (auto w : corpus.doc(d)) builder.add_entry(d, w, blank);
  }
  return std::move(builder).finalize();
}

void GlobalState::publish(std::vector<std::int64_t> next) {
  if (next.size() != counts_.size()) throw InconsistentCounts("c_k snapshot has the wrong number of topics");
  const auto sum = std::accumulate(next.begin(), next.end(), std::int64_t{0});
  if (sum != static_cast<std::int64_t>(token_total_)) {
    throw InconsistentCounts("c_k snapshot sums to " + std::to_string(sum) + ", expected T=" +
                             std::to_string(token_total_));
  }
  counts_ = std::move(next);
}

void init_assignments(TokenMatrix& m, const TrainConfig& cfg) {
  const std::uint32_t slots = m.width() - 1;
  for (std::uint64_t off = 0; off < m.entry_total(); ++off) {
    auto e = m.entry(off);
    RngKey key{cfg.seed, 0, Phase::kInit, off, Purpose::kAssign, 0, 0};
    e[kAssignmentWord] = uniform_index(rng_at(key), cfg.topics);
    key.purpose = Purpose::kPropose;
    for (std::uint32_t i = 0; i < slots; ++i) {
      key.slot = static_cast<std::uint16_t>(i);
      e[proposal_word(i)] = uniform_index(rng_at(key), cfg.topics);
    }
  }
}

std::vector<std::int64_t> topic_totals(const TokenMatrix& m, std::uint32_t topics) {
  std::vector<std::int64_t> totals(topics, 0);
  for (std::uint64_t off = 0; off < m.entry_total(); ++off) ++totals.at(m.entry(off)[kAssignmentWord]);
  return totals;
}

namespace {

struct WorkerScratch {
  SparseCounts counts;
  AliasTable alias;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> entries;
  std::vector<std::uint32_t> row_topics;
};

/// Runs the M-step MH chain of every token of a view against `counts`,
/// keeping `counts` exact as assignments move.
template <class View>
void simulate_chains(View& view, SparseCounts& counts, ProposalKind kind, std::span<const std::int64_t> ck,
                     const Smoothing& smooth, RngKey key, std::uint32_t slots) {
  key.purpose = Purpose::kAccept;
  for (std::uint32_t i = 0; i < view.size(); ++i) {
    auto e = view.data(i);
    std::uint32_t state = e[kAssignmentWord];
    key.token = view.offset(i);
    for (std::uint32_t j = 0; j < slots; ++j) {
      const std::uint32_t proposed = e[proposal_word(j)];
      if (proposed == state) continue;
      key.slot = static_cast<std::uint16_t>(j);
      const std::uint32_t next = mh_accept(state, proposed, kind, counts, ck, smooth, uniform01(rng_at(key)));
      if (next != state) {
        counts.decrement(state);
        counts.increment(next);
        state = next;
      }
    }
    e[kAssignmentWord] = state;
  }
}

}  // namespace

std::vector<std::int64_t> word_phase(TokenMatrix& m, const GlobalState& globals, const TrainConfig& cfg,
                                     std::uint32_t iteration, const PartitionPlan& plan) {
  const std::uint32_t K = cfg.topics;
  const std::uint32_t slots = m.width() - 1;
  const Smoothing smooth = Smoothing::from(cfg, m.cols());
  const auto ck = globals.snapshot();
  std::vector<WorkerScratch> scratch(plan.worker_count);
  SumReducer<std::int64_t> next_ck(K, plan.worker_count);

  m.visit_by_column(
      [&](std::uint32_t, ColumnView col, std::uint32_t worker) {
        const std::uint32_t len = col.size();
        if (len == 0) return;
        auto& s = scratch[worker];
        s.counts.reset(K, len);
        for (std::uint32_t i = 0; i < len; ++i) s.counts.increment(col.data(i)[kAssignmentWord]);

        const RngKey base{cfg.seed, iteration, Phase::kWord, 0, Purpose::kAccept, 0, 0};
        simulate_chains(col, s.counts, ProposalKind::kDoc, ck, smooth, base, slots);

        s.counts.sorted_entries(s.entries);
        s.alias.rebuild(std::span<const std::pair<std::uint32_t, std::uint32_t>>(s.entries));
        RngKey key = base;
        key.purpose = Purpose::kPropose;
        for (std::uint32_t i = 0; i < len; ++i) {
          auto e = col.data(i);
          key.token = col.offset(i);
          for (std::uint32_t j = 0; j < slots; ++j) {
            key.slot = static_cast<std::uint16_t>(j);
            KeyedStream g(key);
            e[proposal_word(j)] = draw_word_proposal(len, cfg.beta, K, s.alias, g);
          }
        }

        auto local = next_ck.local(worker);
        for (const auto& [k, c] : s.entries) local[k] += c;
      },
      plan);
  return next_ck.result();
}

std::vector<std::int64_t> document_phase(TokenMatrix& m, const GlobalState& globals, const TrainConfig& cfg,
                                         std::uint32_t iteration, const PartitionPlan& plan) {
  const std::uint32_t K = cfg.topics;
  const std::uint32_t slots = m.width() - 1;
  const Smoothing smooth = Smoothing::from(cfg, m.cols());
  const auto ck = globals.snapshot();
  std::vector<WorkerScratch> scratch(plan.worker_count);
  SumReducer<std::int64_t> next_ck(K, plan.worker_count);

  m.visit_by_row(
      [&](std::uint32_t, RowView row, std::uint32_t worker) {
        const std::uint32_t len = row.size();
        if (len == 0) return;
        auto& s = scratch[worker];
        s.counts.reset(K, len);
        for (std::uint32_t i = 0; i < len; ++i) s.counts.increment(row.data(i)[kAssignmentWord]);

        const RngKey base{cfg.seed, iteration, Phase::kDocument, 0, Purpose::kAccept, 0, 0};
        simulate_chains(row, s.counts, ProposalKind::kWord, ck, smooth, base, slots);

        s.row_topics.resize(len);
        for (std::uint32_t i = 0; i < len; ++i) s.row_topics[i] = row.data(i)[kAssignmentWord];
        RngKey key = base;
        key.purpose = Purpose::kPropose;
        for (std::uint32_t i = 0; i < len; ++i) {
          auto e = row.data(i);
          key.token = row.offset(i);
          for (std::uint32_t j = 0; j < slots; ++j) {
            key.slot = static_cast<std::uint16_t>(j);
            KeyedStream g(key);
            e[proposal_word(j)] = draw_doc_proposal(s.row_topics, cfg.alpha, K, g);
          }
        }

        auto local = next_ck.local(worker);
        s.counts.for_each([&](std::uint32_t k, std::uint32_t c) { local[k] += c; });
      },
      plan);
  return next_ck.result();
}

Trainer::Trainer(const Corpus& corpus, TrainConfig cfg) : cfg_(cfg) {
  cfg_.validate();
  if (corpus.token_total() == 0) throw std::invalid_argument("corpus has no tokens");
  matrix_ = build_token_matrix(corpus, cfg_.mh_steps);
  plan_ = cfg_.threads > 1 ? matrix_.balanced_plan(cfg_.threads) : matrix_.single_worker();
  globals_ = GlobalState(cfg_.topics, matrix_.entry_total());
  init_assignments(matrix_, cfg_);
  globals_.publish(topic_totals(matrix_, cfg_.topics));
}

IterationMetrics Trainer::step() {
  ++iteration_;
  const auto start = std::chrono::steady_clock::now();
  globals_.publish(word_phase(matrix_, globals_, cfg_, iteration_, plan_));
  globals_.publish(document_phase(matrix_, globals_, cfg_, iteration_, plan_));
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

  IterationMetrics out;
  out.iteration = iteration_;
  out.seconds = elapsed.count();
  out.tokens_per_sec = out.seconds > 0 ? static_cast<double>(matrix_.entry_total()) / out.seconds : 0.0;
  out.loglik = log_joint_likelihood(matrix_, cfg_.topics, cfg_.alpha, cfg_.beta);
  return out;
}

TrainedModel Trainer::model() const {
  return extract_model(collect_counts(matrix_, cfg_.topics), cfg_.alpha, cfg_.beta);
}

void Trainer::save_checkpoint(std::ostream& out) const {
  Checkpoint cp;
  cp.config = cfg_;
  cp.iteration = iteration_;
  cp.topic_counts.assign(globals_.snapshot().begin(), globals_.snapshot().end());
  write_checkpoint(cp, matrix_, out);
}

std::uint64_t estimated_training_bytes(std::uint64_t token_total, std::uint32_t mh_steps) {
  // payload + row id + row index ref, plus the builder's transient copy
  const std::uint64_t per_token = 4ull * (mh_steps + 1) + 4 + 8;
  return 2 * token_total * per_token;
}

TrainedModel train(const Corpus& corpus, const TrainConfig& cfg, MetricsSink* sink) {
  try {
    Trainer trainer(corpus, cfg);
    for (std::uint32_t it = 0; it < cfg.iterations; ++it) {
      const auto metrics = trainer.step();
      if (sink) sink->record(metrics);
    }
    return trainer.model();
  } catch (const std::bad_alloc&) {
    const double gib = static_cast<double>(estimated_training_bytes(corpus.token_total(), cfg.mh_steps)) /
                       (1024.0 * 1024.0 * 1024.0);
    throw std::runtime_error("out of memory: training " + std::to_string(corpus.token_total()) + " tokens with M=" +
                             std::to_string(cfg.mh_steps) + " needs roughly " + std::to_string(gib) +
                             " GiB; reduce M or split the corpus");
  }
}

}  // namespace warplda
