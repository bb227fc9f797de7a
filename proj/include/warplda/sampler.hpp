#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "warplda/config.hpp"
#include "warplda/corpus.hpp"
#include "warplda/matrix.hpp"
#include "warplda/metrics.hpp"
#include "warplda/model.hpp"
#include "warplda/sparse_counts.hpp"

namespace warplda {

/// Payload layout of a token entry: word 0 is the topic assignment, words
/// 1..M are the stored proposals.
constexpr std::uint32_t kAssignmentWord = 0;
inline std::uint32_t proposal_word(std::uint32_t i) { return 1 + i; }

/// Builds the D×V token matrix with one entry per token and M proposal
/// slots, all zeroed. Tokens are added in corpus order.
TokenMatrix build_token_matrix(const Corpus& corpus, std::uint32_t mh_steps);

/// Global topic counts c_k. Phases read the published snapshot only; the
/// counts they accumulate become the next snapshot at the phase boundary.
class GlobalState {
 public:
  GlobalState() = default;
  GlobalState(std::uint32_t topics, std::uint64_t token_total) : token_total_(token_total), counts_(topics, 0) {}

  std::span<const std::int64_t> snapshot() const noexcept { return counts_; }
  /// Throws InconsistentCounts unless the vector has K entries summing to T.
  void publish(std::vector<std::int64_t> next);

 private:
  std::uint64_t token_total_ = 0;
  std::vector<std::int64_t> counts_;
};

/// Smoothing constants used by acceptance ratios.
struct Smoothing {
  double alpha;
  double beta;
  double beta_bar;  // V·beta

  static Smoothing from(const TrainConfig& cfg, std::uint32_t vocab_size) {
    return {cfg.alpha, cfg.beta, vocab_size * cfg.beta};
  }
};

enum class ProposalKind {
  kDoc,   // proposal drawn from q_doc, judged against the word's counts c_w
  kWord,  // proposal drawn from q_word, judged against the document's counts c_d
};

/// One Metropolis-Hastings step. Returns `proposed` when u < ratio, where
///   doc proposals:  ratio = (C_wt+beta)/(C_ws+beta)   · (C_s+beta_bar)/(C_t+beta_bar)
///   word proposals: ratio = (C_dt+alpha)/(C_ds+alpha) · (C_s+beta_bar)/(C_t+beta_bar)
/// and `current` otherwise. u is one uniform value in [0, 1).
inline std::uint32_t mh_accept(std::uint32_t current, std::uint32_t proposed, ProposalKind kind,
                               const SparseCounts& local, std::span<const std::int64_t> topic_counts,
                               const Smoothing& s, double u) {
  if (proposed == current) return current;
  const double smooth = kind == ProposalKind::kDoc ? s.beta : s.alpha;
  const double local_ratio = (local.get(proposed) + smooth) / (local.get(current) + smooth);
  const double global_ratio = (topic_counts[current] + s.beta_bar) / (topic_counts[proposed] + s.beta_bar);
  return u < local_ratio * global_ratio ? proposed : current;
}

/// Sets every assignment and proposal slot to an independent uniform topic,
/// keyed by (seed, iteration 0, token offset, slot).
void init_assignments(TokenMatrix& m, const TrainConfig& cfg);

/// c_k recomputed from the assignments in the matrix.
std::vector<std::int64_t> topic_totals(const TokenMatrix& m, std::uint32_t topics);

/// Word phase (column sweep): accept the stored doc proposals against c_w
/// and the c_k snapshot, then refill every slot with word proposals.
/// Returns the c_k accumulated from the refreshed word counts.
std::vector<std::int64_t> word_phase(TokenMatrix& m, const GlobalState& globals, const TrainConfig& cfg,
                                     std::uint32_t iteration, const PartitionPlan& plan);

/// Document phase (row sweep): accept the stored word proposals against c_d
/// and the c_k snapshot, then refill every slot with doc proposals.
std::vector<std::int64_t> document_phase(TokenMatrix& m, const GlobalState& globals, const TrainConfig& cfg,
                                         std::uint32_t iteration, const PartitionPlan& plan);

/// Drives training over one corpus: owns the token matrix, the partition
/// plan and the c_k snapshot.
class Trainer {
 public:
  /// Validates the config, builds the matrix and initializes assignments.
  Trainer(const Corpus& corpus, TrainConfig cfg);

  /// One full iteration (word phase then document phase), followed by a
  /// log-likelihood evaluation.
  IterationMetrics step();

  std::uint32_t iteration() const noexcept { return iteration_; }
  const TrainConfig& config() const noexcept { return cfg_; }
  const TokenMatrix& matrix() const noexcept { return matrix_; }
  TokenMatrix& matrix() noexcept { return matrix_; }
  const GlobalState& globals() const noexcept { return globals_; }
  const PartitionPlan& plan() const noexcept { return plan_; }

  TrainedModel model() const;
  void save_checkpoint(std::ostream& out) const;

 private:
  TrainConfig cfg_;
  TokenMatrix matrix_;
  PartitionPlan plan_;
  GlobalState globals_;
  std::uint32_t iteration_ = 0;
};

/// Runs cfg.iterations iterations, reporting each to `sink` when given.
/// Memory exhaustion is rethrown as std::runtime_error with a size estimate.
TrainedModel train(const Corpus& corpus, const TrainConfig& cfg, MetricsSink* sink = nullptr);

/// Approximate resident bytes needed to train on T tokens with M proposals.
std::uint64_t estimated_training_bytes(std::uint64_t token_total, std::uint32_t mh_steps);

}  // namespace warplda
