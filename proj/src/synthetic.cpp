#include "warplda/synthetic.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace warplda {

namespace {

std::vector<double> dirichlet(std::size_t n, double concentration, std::mt19937_64& rng) {
  std::gamma_distribution<double> gamma(concentration, 1.0);
  std::vector<double> x(n);
  double sum = 0.0;
  while (!(sum > 0.0)) {
    sum = 0.0;
    for (auto& v : x) sum += (v = gamma(rng));
  }
  for (auto& v : x) v /= sum;
  return x;
}

}  // namespace

std::vector<std::string> numbered_vocab(std::uint32_t size) {
  std::vector<std::string> vocab;
  vocab.reserve(size);
  for (std::uint32_t i = 0; i < size; ++i) vocab.push_back("w" + std::to_string(i));
  return vocab;
}

PlantedLda generate_lda_corpus(const LdaSpec& spec, std::uint64_t seed) {
  if (spec.docs == 0 || spec.vocab == 0 || spec.topics == 0 || spec.doc_length == 0) {
    throw std::invalid_argument("synthetic LDA: all sizes must be positive");
  }
  std::mt19937_64 rng(seed);
  PlantedLda out;
  std::vector<std::discrete_distribution<std::uint32_t>> word_of_topic;
  for (std::uint32_t k = 0; k < spec.topics; ++k) {
    out.phi.push_back(dirichlet(spec.vocab, spec.topic_concentration, rng));
    word_of_topic.emplace_back(out.phi.back().begin(), out.phi.back().end());
  }
  std::vector<std::vector<std::uint32_t>> docs(spec.docs);
  for (auto& doc : docs) {
    out.theta.push_back(dirichlet(spec.topics, spec.doc_concentration, rng));
    std::discrete_distribution<std::uint32_t> topic_of_doc(out.theta.back().begin(), out.theta.back().end());
    doc.reserve(spec.doc_length);
    for (std::uint32_t n = 0; n < spec.doc_length; ++n) doc.push_back(word_of_topic[topic_of_doc(rng)](rng));
  }
  out.corpus = Corpus(std::move(docs), numbered_vocab(spec.vocab));
  return out;
}

Corpus generate_zipf_corpus(std::uint32_t docs, std::uint32_t doc_length, std::uint32_t vocab, double exponent,
                            std::uint64_t seed) {
  if (docs == 0 || vocab == 0) throw std::invalid_argument("zipf corpus: sizes must be positive");
  std::vector<double> weights(vocab);
  for (std::uint32_t i = 0; i < vocab; ++i) weights[i] = 1.0 / std::pow(i + 1.0, exponent);
  std::discrete_distribution<std::uint32_t> word(weights.begin(), weights.end());
  std::mt19937_64 rng(seed);
  std::vector<std::vector<std::uint32_t>> out(docs);
  for (auto& doc : out) {
    doc.reserve(doc_length);
    for (std::uint32_t n = 0; n < doc_length; ++n) doc.push_back(word(rng));
  }
  return Corpus(std::move(out), numbered_vocab(vocab));
}

}  // namespace warplda
