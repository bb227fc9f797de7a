#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>

#include "warplda/alias_table.hpp"
#include "warplda/rng.hpp"
#include "warplda/sparse_counts.hpp"

namespace warplda {

/// Draws from q_doc(k) ∝ C_dk + alpha as a two-component mixture: with
/// probability L_d / (L_d + K·alpha) copy the assignment at a uniformly
/// chosen position of the row, otherwise pick a uniform topic.
/// Consumes exactly two generator values.
template <class Urbg>
std::uint32_t draw_doc_proposal(std::span<const std::uint32_t> row_assignments, double alpha,
                                std::uint32_t num_topics, Urbg& g) {
  if (row_assignments.empty()) throw std::invalid_argument("doc proposal needs a non-empty row");
  const double length = static_cast<double>(row_assignments.size());
  const std::uint64_t coin = g();
  const std::uint64_t pick = g();
  if (uniform01(coin) * (length + num_topics * alpha) < length) {
    return row_assignments[uniform_index(pick, row_assignments.size())];
  }
  return uniform_index(pick, num_topics);
}

/// Draws from q_word(k) ∝ C_wk + beta as a two-component mixture: with
/// probability L_w / (L_w + K·beta) sample the alias table built over the
/// non-zero counts of the word, otherwise pick a uniform topic.
/// Consumes exactly three generator values.
template <class Urbg>
std::uint32_t draw_word_proposal(std::uint64_t word_length, double beta, std::uint32_t num_topics,
                                 const AliasTable& word_alias, Urbg& g) {
  const double length = static_cast<double>(word_length);
  const std::uint64_t coin = g();
  const std::uint64_t a = g();
  const std::uint64_t b = g();
  if (uniform01(coin) * (length + num_topics * beta) < length) return word_alias.draw(a, b);
  return uniform_index(a, num_topics);
}

/// Checked form: rejects an alias table that was not built from `word_counts`.
template <class Urbg>
std::uint32_t draw_word_proposal(const SparseCounts& word_counts, std::uint64_t word_length, double beta,
                                 std::uint32_t num_topics, const AliasTable& word_alias, Urbg& g) {
  if (word_length == 0) throw std::invalid_argument("word proposal needs L_w >= 1");
  if (word_counts.total() != word_length || word_alias.empty() ||
      word_alias.total_weight() != static_cast<double>(word_length)) {
    throw std::logic_error("stale word alias table: counts do not sum to L_w");
  }
  return draw_word_proposal(word_length, beta, num_topics, word_alias, g);
}

}  // namespace warplda
