#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "warplda/matrix.hpp"

namespace warplda {

/// Non-zero (topic, count) pairs of one document or word, by increasing topic.
using TopicCountRow = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

/// Sparse C_d, C_w and c_k.
struct ModelCounts {
  std::uint32_t topics = 0;
  std::vector<TopicCountRow> doc_topic;   // D rows
  std::vector<TopicCountRow> word_topic;  // V rows
  std::vector<std::int64_t> topic_totals;  // K

  std::uint32_t doc_count() const noexcept { return static_cast<std::uint32_t>(doc_topic.size()); }
  std::uint32_t vocab_size() const noexcept { return static_cast<std::uint32_t>(word_topic.size()); }

  /// Throws InconsistentCounts unless sum_d C_dk = sum_w C_wk = C_k for
  /// every k and every row is sorted with topics < K and positive counts.
  void check_consistent() const;

  friend bool operator==(const ModelCounts&, const ModelCounts&) = default;
};

/// Recounts C_d, C_w and c_k from the assignments (payload word 0) of a
/// token matrix.
ModelCounts collect_counts(const TokenMatrix& m, std::uint32_t topics);

/// Point estimates from final counts:
///   theta_dk = (C_dk + alpha) / (L_d + K·alpha)
///   phi_wk   = (C_wk + beta) / (C_k + V·beta)
/// with alpha and beta used directly as the shifted smoothing constants.
/// Rows are evaluated on demand so nothing D×K-sized is materialized.
class TrainedModel {
 public:
  TrainedModel() = default;
  TrainedModel(ModelCounts counts, double alpha, double beta);

  std::uint32_t topics() const noexcept { return counts_.topics; }
  std::uint32_t doc_count() const noexcept { return counts_.doc_count(); }
  std::uint32_t vocab_size() const noexcept { return counts_.vocab_size(); }
  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  const ModelCounts& counts() const noexcept { return counts_; }

  std::vector<double> doc_topic_row(std::uint32_t d) const;  // theta_d, length K
  std::vector<double> topic_word_row(std::uint32_t k) const;  // phi_k, length V
  double phi(std::uint32_t k, std::uint32_t w) const;

  /// The n most probable words of topic k as (word, phi) by decreasing phi
  /// (ties: lower word id).
  std::vector<std::pair<std::uint32_t, double>> top_words(std::uint32_t k, std::uint32_t n) const;

  friend bool operator==(const TrainedModel&, const TrainedModel&) = default;

 private:
  ModelCounts counts_;
  std::vector<std::uint64_t> doc_lengths_;
  double alpha_ = 0.0;
  double beta_ = 0.0;
};

/// Validates the counts, then builds the estimates. Throws InconsistentCounts.
TrainedModel extract_model(ModelCounts counts, double alpha, double beta);

}  // namespace warplda
