#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "warplda/config.hpp"
#include "warplda/corpus.hpp"
#include "warplda/model.hpp"

namespace warplda {

/// Dense C_dk (D×K), C_wk (V×K) and C_k. Cheap to reason about, expensive
/// in memory; used by the reference samplers only.
class DenseCounts {
 public:
  DenseCounts() = default;
  DenseCounts(std::uint32_t docs, std::uint32_t vocab, std::uint32_t topics);

  /// Counts a full assignment vector given in corpus token order.
  /// Throws std::invalid_argument on a size mismatch or a topic >= K.
  static DenseCounts from_assignments(const Corpus& corpus, std::span<const std::uint32_t> z, std::uint32_t topics);

  std::uint32_t topics() const noexcept { return topics_; }
  std::uint32_t doc_count() const noexcept { return docs_; }
  std::uint32_t vocab_size() const noexcept { return vocab_; }

  std::int64_t doc_topic(std::uint32_t d, std::uint32_t k) const { return doc_topic_[std::size_t{d} * topics_ + k]; }
  std::int64_t word_topic(std::uint32_t w, std::uint32_t k) const { return word_topic_[std::size_t{w} * topics_ + k]; }
  std::int64_t topic_total(std::uint32_t k) const { return totals_[k]; }

  std::span<const std::int64_t> doc_row(std::uint32_t d) const {
    return std::span<const std::int64_t>(doc_topic_).subspan(std::size_t{d} * topics_, topics_);
  }
  std::span<const std::int64_t> word_row(std::uint32_t w) const {
    return std::span<const std::int64_t>(word_topic_).subspan(std::size_t{w} * topics_, topics_);
  }
  std::span<const std::int64_t> totals() const noexcept { return totals_; }

  void add(std::uint32_t d, std::uint32_t w, std::uint32_t k);
  /// Throws InconsistentCounts if any of the three counts is already zero.
  void remove(std::uint32_t d, std::uint32_t w, std::uint32_t k);

  /// C_k = sum_d C_dk = sum_w C_wk and no negative entries.
  bool consistent() const;

  ModelCounts to_model_counts() const;

  friend bool operator==(const DenseCounts&, const DenseCounts&) = default;

 private:
  std::uint32_t docs_ = 0, vocab_ = 0, topics_ = 0;
  std::vector<std::int64_t> doc_topic_;
  std::vector<std::int64_t> word_topic_;
  std::vector<std::int64_t> totals_;
};

/// One sweep of collapsed Gibbs sampling in document order. Every token is
/// removed from the counts, resampled from
///   p(k) ∝ (C_dk + alpha)(C_wk + beta) / (C_k + V·beta)
/// by a linear scan, and added back.
void cgs_iteration(const Corpus& corpus, std::vector<std::uint32_t>& z, DenseCounts& counts, double alpha,
                   double beta, std::mt19937_64& rng);

/// Exact normalized q(z=k) ∝ (C_dk + alpha)(C_wk + beta) / (C_k + V·beta).
std::vector<double> enumerate_token_posterior(std::span<const std::int64_t> doc_counts,
                                              std::span<const std::int64_t> word_counts,
                                              std::span<const std::int64_t> topic_counts, double alpha, double beta,
                                              std::uint32_t vocab_size);

/// State of the unreordered MCEM reference: per-token assignment and M
/// proposals kept in corpus token order, plus the c_k snapshot.
struct NaiveMcemState {
  std::uint32_t topics = 0;
  std::uint32_t mh_steps = 0;
  /// Position each corpus token occupies in the column-major store of the
  /// reordered sampler; the only link between the two is this RNG address.
  std::vector<std::uint64_t> store_offset;
  std::vector<std::uint32_t> z;
  std::vector<std::uint32_t> proposals;  // T×M, token-major
  std::vector<std::int64_t> topic_counts;

  std::span<const std::uint32_t> proposals_of(std::uint64_t token) const {
    return std::span<const std::uint32_t>(proposals).subspan(token * mh_steps, mh_steps);
  }
};

/// Initializes assignments and proposals with the sampler's RNG keys.
NaiveMcemState naive_mcem_init(const Corpus& corpus, const TrainConfig& cfg);

/// Word phase then document phase on dense count mirrors, visiting tokens in
/// corpus order instead of by column / by row.
void naive_mcem_word_phase(const Corpus& corpus, NaiveMcemState& state, const TrainConfig& cfg,
                           std::uint32_t iteration);
void naive_mcem_document_phase(const Corpus& corpus, NaiveMcemState& state, const TrainConfig& cfg,
                               std::uint32_t iteration);
void naive_mcem_iteration(const Corpus& corpus, NaiveMcemState& state, const TrainConfig& cfg,
                          std::uint32_t iteration);

}  // namespace warplda
