#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace warplda {

/// A bag-of-words corpus expanded into tokens. Documents are stored
/// back-to-back in one word-id array; `doc(d)` is the token sequence of
/// document d in file order. Immutable once built.
class Corpus {
 public:
  Corpus() = default;

  /// Validates word ids against the vocabulary and rejects duplicate words.
  /// Throws std::invalid_argument on violation.
  Corpus(std::vector<std::vector<std::uint32_t>> docs, std::vector<std::string> vocab);

  std::uint32_t doc_count() const noexcept { return static_cast<std::uint32_t>(doc_begin_.size() - 1); }
  std::uint32_t vocab_size() const noexcept { return static_cast<std::uint32_t>(vocab_.size()); }
  std::uint64_t token_total() const noexcept { return words_.size(); }

  std::span<const std::uint32_t> doc(std::uint32_t d) const {
    return {words_.data() + doc_begin_[d], words_.data() + doc_begin_[d + 1]};
  }
  std::uint64_t doc_length(std::uint32_t d) const { return doc_begin_[d + 1] - doc_begin_[d]; }
  /// Offset of document d's first token in corpus order.
  std::uint64_t doc_offset(std::uint32_t d) const { return doc_begin_[d]; }

  const std::vector<std::string>& vocab() const noexcept { return vocab_; }
  std::span<const std::uint32_t> tokens() const noexcept { return words_; }

  /// Term frequency L_w of every word.
  std::vector<std::uint64_t> term_frequencies() const;

  friend bool operator==(const Corpus&, const Corpus&) = default;

 private:
  std::vector<std::uint64_t> doc_begin_{0};
  std::vector<std::uint32_t> words_;
  std::vector<std::string> vocab_;
};

struct CorpusStats {
  std::uint32_t doc_count = 0;
  std::uint32_t vocab_size = 0;
  std::uint64_t token_total = 0;

  /// T/D as an exact fraction; `mean_doc_len()` rounds it.
  std::uint64_t mean_numerator() const noexcept { return token_total; }
  std::uint64_t mean_denominator() const noexcept { return doc_count; }
  double mean_doc_len() const noexcept {
    return doc_count ? static_cast<double>(token_total) / doc_count : 0.0;
  }
  /// Nearest integer to T/D, halves rounded up.
  std::uint64_t mean_doc_len_rounded() const noexcept {
    return doc_count ? (2 * token_total + doc_count) / (2 * static_cast<std::uint64_t>(doc_count)) : 0;
  }
};

CorpusStats corpus_stats(const Corpus& c);

/// Parses the UCI bag-of-words format: a docword stream with header lines
/// D, W, NNZ followed by NNZ "docId wordId count" triples (1-based ids),
/// and a vocab stream with one word per line. Each triple expands to
/// `count` tokens appended to its document in file order.
/// Throws ParseError naming the offending line.
Corpus parse_uci_bag_of_words(std::istream& docword, std::istream& vocab);

/// Same as above with a synthetic vocabulary of decimal word ids.
Corpus parse_uci_bag_of_words(std::istream& docword);

/// Reads a file, transparently inflating it when it starts with the gzip
/// magic bytes.
std::string read_maybe_gzip(const std::filesystem::path& path);

/// File-based convenience wrapper over parse_uci_bag_of_words.
Corpus load_uci_corpus(const std::filesystem::path& docword,
                       const std::optional<std::filesystem::path>& vocab = std::nullopt);

/// Writes a corpus back out in UCI format (triples grouped per document in
/// first-occurrence order, counts merged).
void write_uci_bag_of_words(const Corpus& c, std::ostream& docword, std::ostream& vocab);

}  // namespace warplda
