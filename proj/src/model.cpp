#include "warplda/model.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "warplda/error.hpp"
#include "warplda/sparse_counts.hpp"

namespace warplda {

namespace {

void check_row(const TopicCountRow& row, std::uint32_t topics, const char* what, std::size_t index) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    const auto [k, c] = row[i];
    if (k >= topics || c == 0 || (i > 0 && row[i - 1].first >= k)) {
      throw InconsistentCounts(std::string("malformed ") + what + " row " + std::to_string(index));
    }
  }
}

}  // namespace

void ModelCounts::check_consistent() const {
  if (topic_totals.size() != topics) throw InconsistentCounts("topic total vector has the wrong length");
  std::vector<std::int64_t> by_doc(topics, 0), by_word(topics, 0);
  for (std::size_t d = 0; d < doc_topic.size(); ++d) {
    check_row(doc_topic[d], topics, "document", d);
    for (const auto& [k, c] : doc_topic[d]) by_doc[k] += c;
  }
  for (std::size_t w = 0; w < word_topic.size(); ++w) {
    check_row(word_topic[w], topics, "word", w);
    for (const auto& [k, c] : word_topic[w]) by_word[k] += c;
  }
  for (std::uint32_t k = 0; k < topics; ++k) {
    if (by_doc[k] != topic_totals[k] || by_word[k] != topic_totals[k]) {
      throw InconsistentCounts("topic " + std::to_string(k) + ": sum_d C_dk=" + std::to_string(by_doc[k]) +
                               ", sum_w C_wk=" + std::to_string(by_word[k]) +
                               ", C_k=" + std::to_string(topic_totals[k]));
    }
  }
}

ModelCounts collect_counts(const TokenMatrix& m, std::uint32_t topics) {
  ModelCounts out;
  out.topics = topics;
  out.doc_topic.resize(m.rows());
  out.word_topic.resize(m.cols());
  out.topic_totals.assign(topics, 0);
  SparseCounts counts;
  for (std::uint32_t d = 0; d < m.rows(); ++d) {
    const auto refs = m.row_refs(d);
    counts.reset(topics, refs.size());
    for (auto off : refs) counts.increment(m.entry(off)[0]);
    counts.sorted_entries(out.doc_topic[d]);
  }
  for (std::uint32_t w = 0; w < m.cols(); ++w) {
    const auto begin = m.column_begin(w);
    const auto len = m.column_length(w);
    counts.reset(topics, len);
    for (std::uint64_t i = 0; i < len; ++i) counts.increment(m.entry(begin + i)[0]);
    counts.sorted_entries(out.word_topic[w]);
    for (const auto& [k, c] : out.word_topic[w]) out.topic_totals[k] += c;
  }
  return out;
}

TrainedModel::TrainedModel(ModelCounts counts, double alpha, double beta)
    : counts_(std::move(counts)), alpha_(alpha), beta_(beta) {
  doc_lengths_.reserve(counts_.doc_count());
  for (const auto& row : counts_.doc_topic) {
    std::uint64_t len = 0;
    for (const auto& [k, c] : row) len += c;
    doc_lengths_.push_back(len);
  }
}

std::vector<double> TrainedModel::doc_topic_row(std::uint32_t d) const {
  const std::uint32_t K = topics();
  const double denom = static_cast<double>(doc_lengths_.at(d)) + K * alpha_;
  std::vector<double> theta(K, alpha_ / denom);
  for (const auto& [k, c] : counts_.doc_topic[d]) theta[k] = (c + alpha_) / denom;
  return theta;
}

std::vector<double> TrainedModel::topic_word_row(std::uint32_t k) const {
  if (k >= topics()) throw std::out_of_range("topic id out of range");
  const std::uint32_t V = vocab_size();
  const double denom = static_cast<double>(counts_.topic_totals[k]) + V * beta_;
  std::vector<double> phi(V, beta_ / denom);
  for (std::uint32_t w = 0; w < V; ++w) {
    const auto& row = counts_.word_topic[w];
    auto it = std::lower_bound(row.begin(), row.end(), k, [](const auto& e, std::uint32_t t) { return e.first < t; });
    if (it != row.end() && it->first == k) phi[w] = (it->second + beta_) / denom;
  }
  return phi;
}

double TrainedModel::phi(std::uint32_t k, std::uint32_t w) const {
  if (k >= topics() || w >= vocab_size()) throw std::out_of_range("phi index out of range");
  const auto& row = counts_.word_topic[w];
  auto it = std::lower_bound(row.begin(), row.end(), k, [](const auto& e, std::uint32_t t) { return e.first < t; });
  const double c = (it != row.end() && it->first == k) ? it->second : 0.0;
  return (c + beta_) / (static_cast<double>(counts_.topic_totals[k]) + vocab_size() * beta_);
}

std::vector<std::pair<std::uint32_t, double>> TrainedModel::top_words(std::uint32_t k, std::uint32_t n) const {
  const auto phi = topic_word_row(k);
  std::vector<std::pair<std::uint32_t, double>> out;
  out.reserve(phi.size());
  for (std::uint32_t w = 0; w < phi.size(); ++w) out.emplace_back(w, phi[w]);
  const auto take = std::min<std::size_t>(n, out.size());
  std::partial_sort(out.begin(), out.begin() + take, out.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  out.resize(take);
  return out;
}

TrainedModel extract_model(ModelCounts counts, double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > 0.0)) throw std::invalid_argument("alpha and beta must be positive");
  counts.check_consistent();
  return TrainedModel(std::move(counts), alpha, beta);
}

}  // namespace warplda
