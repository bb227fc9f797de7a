#include "warplda/baseline.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

#include "warplda/alias_table.hpp"
#include "warplda/error.hpp"
#include "warplda/proposals.hpp"
#include "warplda/rng.hpp"

namespace warplda {

DenseCounts::DenseCounts(std::uint32_t docs, std::uint32_t vocab, std::uint32_t topics)
    : docs_(docs),
      vocab_(vocab),
      topics_(topics),
      doc_topic_(std::size_t{docs} * topics, 0),
      word_topic_(std::size_t{vocab} * topics, 0),
      totals_(topics, 0) {}

DenseCounts DenseCounts::from_assignments(const Corpus& corpus, std::span<const std::uint32_t> z,
                                          std::uint32_t topics) {
  if (z.size() != corpus.token_total()) throw std::invalid_argument("one assignment per token is required");
  DenseCounts out(corpus.doc_count(), corpus.vocab_size(), topics);
  std::uint64_t g = 0;
  for (std::uint32_t d = 0; d < corpus.doc_count(); ++d) {
    for (auto w : corpus.doc(d)) {
      if (z[g] >= topics) throw std::invalid_argument("assignment " + std::to_string(z[g]) + " >= K");
      out.add(d, w, z[g++]);
    }
  }
  return out;
}

void DenseCounts::add(std::uint32_t d, std::uint32_t w, std::uint32_t k) {
  ++doc_topic_[std::size_t{d} * topics_ + k];
  ++word_topic_[std::size_t{w} * topics_ + k];
  ++totals_[k];
}

void DenseCounts::remove(std::uint32_t d, std::uint32_t w, std::uint32_t k) {
  auto& cd = doc_topic_[std::size_t{d} * topics_ + k];
  auto& cw = word_topic_[std::size_t{w} * topics_ + k];
  if (cd <= 0 || cw <= 0 || totals_[k] <= 0) {
    throw InconsistentCounts("removing topic " + std::to_string(k) + " from doc " + std::to_string(d) + ", word " +
                             std::to_string(w) + " drives a count negative");
  }
  --cd;
  --cw;
  --totals_[k];
}

bool DenseCounts::consistent() const {
  std::vector<std::int64_t> by_doc(topics_, 0), by_word(topics_, 0);
  for (std::size_t i = 0; i < doc_topic_.size(); ++i) {
    if (doc_topic_[i] < 0) return false;
    by_doc[i % topics_] += doc_topic_[i];
  }
  for (std::size_t i = 0; i < word_topic_.size(); ++i) {
    if (word_topic_[i] < 0) return false;
    by_word[i % topics_] += word_topic_[i];
  }
  return by_doc == totals_ && by_word == totals_;
}

ModelCounts DenseCounts::to_model_counts() const {
  ModelCounts out;
  out.topics = topics_;
  out.doc_topic.resize(docs_);
  out.word_topic.resize(vocab_);
  out.topic_totals = totals_;
  for (std::uint32_t d = 0; d < docs_; ++d) {
    for (std::uint32_t k = 0; k < topics_; ++k) {
      if (auto c = doc_topic(d, k)) out.doc_topic[d].emplace_back(k, static_cast<std::uint32_t>(c));
    }
  }
  for (std::uint32_t w = 0; w < vocab_; ++w) {
    for (std::uint32_t k = 0; k < topics_; ++k) {
      if (auto c = word_topic(w, k)) out.word_topic[w].emplace_back(k, static_cast<std::uint32_t>(c));
    }
  }
  return out;
}

void cgs_iteration(const Corpus& corpus, std::vector<std::uint32_t>& z, DenseCounts& counts, double alpha,
                   double beta, std::mt19937_64& rng) {
  const std::uint32_t K = counts.topics();
  if (z.size() != corpus.token_total()) throw std::invalid_argument("one assignment per token is required");
  const double beta_bar = counts.vocab_size() * beta;
  std::vector<double> cumulative(K);
  std::uint64_t g = 0;
  for (std::uint32_t d = 0; d < corpus.doc_count(); ++d) {
    for (auto w : corpus.doc(d)) {
      counts.remove(d, w, z[g]);
      const auto cd = counts.doc_row(d);
      const auto cw = counts.word_row(w);
      const auto ck = counts.totals();
      double sum = 0.0;
      for (std::uint32_t k = 0; k < K; ++k) {
        sum += (cd[k] + alpha) * (cw[k] + beta) / (ck[k] + beta_bar);
        cumulative[k] = sum;
      }
      const double u = uniform01(rng()) * sum;
      const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
      const auto k = static_cast<std::uint32_t>(std::min<std::ptrdiff_t>(it - cumulative.begin(), K - 1));
      z[g++] = k;
      counts.add(d, w, k);
    }
  }
}

std::vector<double> enumerate_token_posterior(std::span<const std::int64_t> doc_counts,
                                              std::span<const std::int64_t> word_counts,
                                              std::span<const std::int64_t> topic_counts, double alpha, double beta,
                                              std::uint32_t vocab_size) {
  const std::size_t K = topic_counts.size();
  if (doc_counts.size() != K || word_counts.size() != K) throw std::invalid_argument("count vectors differ in length");
  const double beta_bar = vocab_size * beta;
  std::vector<double> p(K);
  for (std::size_t k = 0; k < K; ++k) p[k] = (doc_counts[k] + alpha) * (word_counts[k] + beta) / (topic_counts[k] + beta_bar);
  const double sum = std::accumulate(p.begin(), p.end(), 0.0);
  for (auto& x : p) x /= sum;
  return p;
}

namespace {

// Same floating-point expression as mh_accept, over a dense count row.
std::uint32_t dense_accept(std::uint32_t current, std::uint32_t proposed, double smooth,
                           std::span<const std::int64_t> local, std::span<const std::int64_t> ck, double beta_bar,
                           double u) {
  if (proposed == current) return current;
  const double local_ratio = (static_cast<double>(local[proposed]) + smooth) / (static_cast<double>(local[current]) + smooth);
  const double global_ratio = (ck[current] + beta_bar) / (ck[proposed] + beta_bar);
  return u < local_ratio * global_ratio ? proposed : current;
}

}  // namespace

NaiveMcemState naive_mcem_init(const Corpus& corpus, const TrainConfig& cfg) {
  cfg.validate();
  NaiveMcemState s;
  s.topics = cfg.topics;
  s.mh_steps = cfg.mh_steps;
  const std::uint64_t T = corpus.token_total();

  // Column-major position: tokens of lower word ids first, then by document.
  const auto freq = corpus.term_frequencies();
  std::vector<std::uint64_t> next(corpus.vocab_size(), 0);
  std::exclusive_scan(freq.begin(), freq.end(), next.begin(), std::uint64_t{0});
  s.store_offset.resize(T);
  for (std::uint64_t g = 0; g < T; ++g) s.store_offset[g] = next[corpus.tokens()[g]]++;

  s.z.resize(T);
  s.proposals.resize(T * cfg.mh_steps);
  s.topic_counts.assign(cfg.topics, 0);
  for (std::uint64_t g = 0; g < T; ++g) {
    RngKey key{cfg.seed, 0, Phase::kInit, s.store_offset[g], Purpose::kAssign, 0, 0};
    s.z[g] = uniform_index(rng_at(key), cfg.topics);
    ++s.topic_counts[s.z[g]];
    key.purpose = Purpose::kPropose;
    for (std::uint32_t i = 0; i < cfg.mh_steps; ++i) {
      key.slot = static_cast<std::uint16_t>(i);
      s.proposals[g * cfg.mh_steps + i] = uniform_index(rng_at(key), cfg.topics);
    }
  }
  return s;
}

void naive_mcem_word_phase(const Corpus& corpus, NaiveMcemState& s, const TrainConfig& cfg, std::uint32_t iteration) {
  const std::uint32_t K = s.topics, M = s.mh_steps, V = corpus.vocab_size();
  const std::uint64_t T = corpus.token_total();
  const double beta_bar = V * cfg.beta;
  const std::vector<std::int64_t> ck = s.topic_counts;

  DenseCounts dense = DenseCounts::from_assignments(corpus, s.z, K);
  std::vector<std::int64_t> cw(std::size_t{V} * K);
  for (std::uint32_t w = 0; w < V; ++w) std::copy_n(dense.word_row(w).begin(), K, cw.begin() + std::size_t{w} * K);

  for (std::uint64_t g = 0; g < T; ++g) {
    const std::uint32_t w = corpus.tokens()[g];
    std::span<std::int64_t> row(cw.data() + std::size_t{w} * K, K);
    std::uint32_t state = s.z[g];
    for (std::uint32_t i = 0; i < M; ++i) {
      const std::uint32_t proposed = s.proposals[g * M + i];
      if (proposed == state) continue;
      const RngKey key{cfg.seed, iteration, Phase::kWord, s.store_offset[g], Purpose::kAccept,
                       static_cast<std::uint16_t>(i), 0};
      const std::uint32_t next = dense_accept(state, proposed, cfg.beta, row, ck, beta_bar, uniform01(rng_at(key)));
      if (next != state) {
        --row[state];
        ++row[next];
        state = next;
      }
    }
    s.z[g] = state;
  }

  std::vector<AliasTable> alias(V);
  std::vector<std::uint64_t> length(V, 0);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> entries;
  for (std::uint64_t g = 0; g < T; ++g) {
    const std::uint32_t w = corpus.tokens()[g];
    if (alias[w].empty()) {
      entries.clear();
      for (std::uint32_t k = 0; k < K; ++k) {
        const auto c = cw[std::size_t{w} * K + k];
        if (c > 0) entries.emplace_back(k, static_cast<std::uint32_t>(c));
        length[w] += c;
      }
      alias[w].rebuild(std::span<const std::pair<std::uint32_t, std::uint32_t>>(entries));
    }
    for (std::uint32_t i = 0; i < M; ++i) {
      KeyedStream stream(
          RngKey{cfg.seed, iteration, Phase::kWord, s.store_offset[g], Purpose::kPropose, static_cast<std::uint16_t>(i), 0});
      s.proposals[g * M + i] = draw_word_proposal(length[w], cfg.beta, K, alias[w], stream);
    }
  }

  std::vector<std::int64_t> next_ck(K, 0);
  for (std::size_t i = 0; i < cw.size(); ++i) next_ck[i % K] += cw[i];
  s.topic_counts = std::move(next_ck);
}

void naive_mcem_document_phase(const Corpus& corpus, NaiveMcemState& s, const TrainConfig& cfg,
                               std::uint32_t iteration) {
  const std::uint32_t K = s.topics, M = s.mh_steps;
  const double beta_bar = corpus.vocab_size() * cfg.beta;
  const std::vector<std::int64_t> ck = s.topic_counts;
  std::vector<std::int64_t> next_ck(K, 0);

  std::vector<std::int64_t> cd(K);
  std::vector<std::uint64_t> order;
  std::vector<std::uint32_t> row_topics;
  for (std::uint32_t d = 0; d < corpus.doc_count(); ++d) {
    const std::uint64_t begin = corpus.doc_offset(d);
    const auto words = corpus.doc(d);
    if (words.empty()) continue;
    // A document's tokens ordered by word id, then by position in the document.
    order.resize(words.size());
    std::iota(order.begin(), order.end(), begin);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::uint64_t a, std::uint64_t b) { return corpus.tokens()[a] < corpus.tokens()[b]; });

    std::fill(cd.begin(), cd.end(), 0);
    for (auto g : order) ++cd[s.z[g]];
    for (auto g : order) {
      std::uint32_t state = s.z[g];
      for (std::uint32_t i = 0; i < M; ++i) {
        const std::uint32_t proposed = s.proposals[g * M + i];
        if (proposed == state) continue;
        const RngKey key{cfg.seed, iteration, Phase::kDocument, s.store_offset[g], Purpose::kAccept,
                         static_cast<std::uint16_t>(i), 0};
        const std::uint32_t next = dense_accept(state, proposed, cfg.alpha, cd, ck, beta_bar, uniform01(rng_at(key)));
        if (next != state) {
          --cd[state];
          ++cd[next];
          state = next;
        }
      }
      s.z[g] = state;
    }

    row_topics.clear();
    for (auto g : order) row_topics.push_back(s.z[g]);
    for (auto g : order) {
      for (std::uint32_t i = 0; i < M; ++i) {
        KeyedStream stream(RngKey{cfg.seed, iteration, Phase::kDocument, s.store_offset[g], Purpose::kPropose,
                                  static_cast<std::uint16_t>(i), 0});
        s.proposals[g * M + i] = draw_doc_proposal(row_topics, cfg.alpha, K, stream);
      }
    }
    for (std::uint32_t k = 0; k < K; ++k) next_ck[k] += cd[k];
  }
  s.topic_counts = std::move(next_ck);
}

void naive_mcem_iteration(const Corpus& corpus, NaiveMcemState& state, const TrainConfig& cfg,
                          std::uint32_t iteration) {
  naive_mcem_word_phase(corpus, state, cfg, iteration);
  naive_mcem_document_phase(corpus, state, cfg, iteration);
}

}  // namespace warplda
