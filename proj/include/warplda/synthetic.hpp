#pragma once

#include <cstdint>
#include <vector>

#include "warplda/corpus.hpp"

namespace warplda {

struct LdaSpec {
  std::uint32_t docs = 1000;
  std::uint32_t vocab = 200;
  std::uint32_t topics = 5;
  std::uint32_t doc_length = 100;
  double doc_concentration = 0.1;    // symmetric Dirichlet over topics per document
  double topic_concentration = 0.05;  // symmetric Dirichlet over words per topic
};

/// A corpus sampled from the LDA generative process together with the
/// planted parameters it was drawn from.
struct PlantedLda {
  Corpus corpus;
  std::vector<std::vector<double>> phi;    // K×V, rows sum to 1
  std::vector<std::vector<double>> theta;  // D×K, rows sum to 1
};

/// Deterministic for a given seed (within one standard library). Word i is
/// named "w<i>".
PlantedLda generate_lda_corpus(const LdaSpec& spec, std::uint64_t seed);

/// D documents of `doc_length` tokens, each word drawn independently with
/// P(word i) ∝ 1 / (i+1)^exponent.
Corpus generate_zipf_corpus(std::uint32_t docs, std::uint32_t doc_length, std::uint32_t vocab, double exponent,
                            std::uint64_t seed);

/// "w0", "w1", ...
std::vector<std::string> numbered_vocab(std::uint32_t size);

}  // namespace warplda
