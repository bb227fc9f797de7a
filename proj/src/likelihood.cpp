#include "warplda/likelihood.hpp"

#include <cmath>
#include <stdexcept>

#include "warplda/baseline.hpp"
#include "warplda/sparse_counts.hpp"

namespace warplda {

double log_gamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("log_gamma needs a positive argument");
  return std::lgamma(x);
}

LikelihoodAccumulator::LikelihoodAccumulator(std::uint32_t topics, std::uint32_t vocab_size, double alpha,
                                             double beta)
    : alpha_(alpha),
      beta_(beta),
      alpha_bar_(topics * alpha),
      beta_bar_(vocab_size * beta),
      lg_alpha_(log_gamma(alpha)),
      lg_beta_(log_gamma(beta)),
      lg_alpha_bar_(log_gamma(topics * alpha)),
      lg_beta_bar_(log_gamma(vocab_size * beta)) {}

void LikelihoodAccumulator::add_doc_count(std::uint64_t count) {
  sum_ += log_gamma(alpha_ + static_cast<double>(count)) - lg_alpha_;
}

void LikelihoodAccumulator::end_doc(std::uint64_t doc_length) {
  if (doc_length == 0) return;
  sum_ += lg_alpha_bar_ - log_gamma(alpha_bar_ + static_cast<double>(doc_length));
}

void LikelihoodAccumulator::add_word_count(std::uint64_t count) {
  sum_ += log_gamma(beta_ + static_cast<double>(count)) - lg_beta_;
}

void LikelihoodAccumulator::add_topic_total(std::int64_t topic_total) {
  if (topic_total < 0) throw std::invalid_argument("negative topic count");
  if (topic_total == 0) return;
  sum_ += lg_beta_bar_ - log_gamma(beta_bar_ + static_cast<double>(topic_total));
}

double log_joint_likelihood(const ModelCounts& counts, double alpha, double beta) {
  LikelihoodAccumulator acc(counts.topics, counts.vocab_size(), alpha, beta);
  for (const auto& row : counts.doc_topic) {
    std::uint64_t len = 0;
    for (const auto& [k, c] : row) {
      acc.add_doc_count(c);
      len += c;
    }
    acc.end_doc(len);
  }
  for (const auto& row : counts.word_topic) {
    for (const auto& [k, c] : row) acc.add_word_count(c);
  }
  for (auto ck : counts.topic_totals) acc.add_topic_total(ck);
  return acc.value();
}

double log_joint_likelihood(const DenseCounts& counts, double alpha, double beta) {
  const std::uint32_t K = counts.topics();
  LikelihoodAccumulator acc(K, counts.vocab_size(), alpha, beta);
  for (std::uint32_t d = 0; d < counts.doc_count(); ++d) {
    std::uint64_t len = 0;
    for (std::uint32_t k = 0; k < K; ++k) {
      const auto c = counts.doc_topic(d, k);
      if (c < 0) throw std::invalid_argument("negative document-topic count");
      if (c == 0) continue;
      acc.add_doc_count(static_cast<std::uint64_t>(c));
      len += static_cast<std::uint64_t>(c);
    }
    acc.end_doc(len);
  }
  for (std::uint32_t w = 0; w < counts.vocab_size(); ++w) {
    for (std::uint32_t k = 0; k < K; ++k) {
      const auto c = counts.word_topic(w, k);
      if (c < 0) throw std::invalid_argument("negative word-topic count");
      if (c > 0) acc.add_word_count(static_cast<std::uint64_t>(c));
    }
  }
  for (std::uint32_t k = 0; k < K; ++k) acc.add_topic_total(counts.topic_total(k));
  return acc.value();
}

double log_joint_likelihood(const TokenMatrix& m, std::uint32_t topics, double alpha, double beta) {
  LikelihoodAccumulator acc(topics, m.cols(), alpha, beta);
  SparseCounts counts;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> entries;
  std::vector<std::int64_t> totals(topics, 0);

  for (std::uint32_t d = 0; d < m.rows(); ++d) {
    const auto refs = m.row_refs(d);
    counts.reset(topics, refs.size());
    for (auto off : refs) counts.increment(m.entry(off)[0]);
    counts.sorted_entries(entries);
    for (const auto& [k, c] : entries) acc.add_doc_count(c);
    acc.end_doc(refs.size());
  }
  for (std::uint32_t w = 0; w < m.cols(); ++w) {
    const auto begin = m.column_begin(w);
    const auto len = m.column_length(w);
    counts.reset(topics, len);
    for (std::uint64_t i = 0; i < len; ++i) counts.increment(m.entry(begin + i)[0]);
    counts.sorted_entries(entries);
    for (const auto& [k, c] : entries) {
      acc.add_word_count(c);
      totals[k] += c;
    }
  }
  for (auto ck : totals) acc.add_topic_total(ck);
  return acc.value();
}

}  // namespace warplda
