#include "warplda/corpus.hpp"

#include <zlib.h>

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "warplda/error.hpp"

namespace warplda {

Corpus::Corpus(std::vector<std::vector<std::uint32_t>> docs, std::vector<std::string> vocab)
    : vocab_(std::move(vocab)) {
  std::unordered_set<std::string_view> seen;
  seen.reserve(vocab_.size());
  for (const auto& w : vocab_) {
    if (!seen.insert(w).second) throw std::invalid_argument("duplicate vocabulary word '" + w + "'");
  }
  std::uint64_t total = 0;
  for (const auto& d : docs) total += d.size();
  words_.reserve(total);
  doc_begin_.reserve(docs.size() + 1);
  for (const auto& d : docs) {
    for (auto w : d) {
      if (w >= vocab_.size()) {
        throw std::invalid_argument("word id " + std::to_string(w) + " out of range for vocabulary of " +
                                    std::to_string(vocab_.size()));
      }
      words_.push_back(w);
    }
    doc_begin_.push_back(words_.size());
  }
}

std::vector<std::uint64_t> Corpus::term_frequencies() const {
  std::vector<std::uint64_t> tf(vocab_size(), 0);
  for (auto w : words_) ++tf[w];
  return tf;
}

CorpusStats corpus_stats(const Corpus& c) {
  return CorpusStats{c.doc_count(), c.vocab_size(), c.token_total()};
}

namespace {

class LineReader {
 public:
  LineReader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

  bool next(std::string& line) {
    if (!std::getline(in_, line)) return false;
    ++line_no_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  }

  std::uint64_t line_no() const { return line_no_; }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(source_, line_no_, what); }

 private:
  std::istream& in_;
  std::string source_;
  std::uint64_t line_no_ = 0;
};

bool is_blank(std::string_view s) {
  return s.find_first_not_of(" \t") == std::string_view::npos;
}

// Parses whitespace-separated unsigned integers; returns how many were read,
// or -1 on a non-numeric field.
int parse_fields(std::string_view s, std::uint64_t* out, int max_fields) {
  int n = 0;
  std::size_t i = 0;
  while (true) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    if (i == s.size()) return n;
    if (n == max_fields) return max_fields + 1;
    if (s[i] == '-' || s[i] == '+') return -1;
    auto [ptr, ec] = std::from_chars(s.data() + i, s.data() + s.size(), out[n]);
    if (ec != std::errc{}) return -1;
    i = static_cast<std::size_t>(ptr - s.data());
    if (i < s.size() && s[i] != ' ' && s[i] != '\t') return -1;
    ++n;
  }
}

std::uint64_t read_header_value(LineReader& r, std::string& line, const char* name) {
  if (!r.next(line)) r.fail(std::string("missing header line for ") + name);
  std::uint64_t v = 0;
  if (parse_fields(line, &v, 1) != 1) r.fail(std::string("malformed header: expected a single integer ") + name);
  return v;
}

Corpus parse_docword(std::istream& docword, std::vector<std::string> vocab, bool check_vocab) {
  LineReader r(docword, "docword");
  std::string line;
  const auto D = read_header_value(r, line, "D");
  const auto W = read_header_value(r, line, "W");
  const auto nnz = read_header_value(r, line, "NNZ");
  if (D == 0 || D > UINT32_MAX) r.fail("malformed header: D must be in [1, 2^32)");
  if (W == 0 || W > UINT32_MAX) r.fail("malformed header: W must be in [1, 2^32)");
  if (check_vocab && vocab.size() != W) {
    throw ParseError("vocab", 0,
                     "vocabulary has " + std::to_string(vocab.size()) + " lines but header declares W=" +
                         std::to_string(W));
  }
  if (!check_vocab) {
    vocab.reserve(W);
    for (std::uint64_t w = 0; w < W; ++w) vocab.push_back(std::to_string(w));
  }

  std::vector<std::vector<std::uint32_t>> docs(D);
  std::uint64_t triples = 0;
  while (r.next(line)) {
    if (is_blank(line)) continue;
    std::uint64_t f[3];
    if (parse_fields(line, f, 3) != 3) r.fail("malformed triple: expected 'docId wordId count'");
    if (triples == nnz) r.fail("more triples than NNZ=" + std::to_string(nnz));
    const auto [doc, word, count] = std::tuple{f[0], f[1], f[2]};
    if (doc < 1 || doc > D) r.fail("docId " + std::to_string(doc) + " out of range [1, " + std::to_string(D) + "]");
    if (word < 1 || word > W) r.fail("wordId " + std::to_string(word) + " out of range [1, " + std::to_string(W) + "]");
    if (count == 0) r.fail("non-positive count");
    auto& d = docs[doc - 1];
    d.insert(d.end(), count, static_cast<std::uint32_t>(word - 1));
    ++triples;
  }
  if (triples != nnz) {
    throw ParseError("docword", r.line_no(),
                     "expected " + std::to_string(nnz) + " triples, found " + std::to_string(triples));
  }
  return Corpus(std::move(docs), std::move(vocab));
}

}  // namespace

Corpus parse_uci_bag_of_words(std::istream& docword, std::istream& vocab_stream) {
  LineReader r(vocab_stream, "vocab");
  std::vector<std::string> vocab;
  std::unordered_map<std::string, std::uint64_t> first_line;
  std::string line;
  while (r.next(line)) {
    auto [it, fresh] = first_line.emplace(line, r.line_no());
    if (!fresh) r.fail("duplicate word '" + line + "' (first seen on line " + std::to_string(it->second) + ")");
    vocab.push_back(line);
  }
  return parse_docword(docword, std::move(vocab), true);
}

Corpus parse_uci_bag_of_words(std::istream& docword) { return parse_docword(docword, {}, false); }

std::string read_maybe_gzip(const std::filesystem::path& path) {
  std::ifstream probe(path, std::ios::binary);
  if (!probe) throw std::runtime_error("cannot open " + path.string());
  unsigned char magic[2] = {0, 0};
  probe.read(reinterpret_cast<char*>(magic), 2);
  const bool gz = probe.gcount() == 2 && magic[0] == 0x1f && magic[1] == 0x8b;
  if (!gz) {
    probe.clear();
    probe.seekg(0);
    std::ostringstream ss;
    ss << probe.rdbuf();
    return std::move(ss).str();
  }
  probe.close();

  gzFile f = gzopen(path.c_str(), "rb");
  if (!f) throw std::runtime_error("cannot open " + path.string());
  std::string out;
  char buf[1 << 16];
  int n = 0;
  while ((n = gzread(f, buf, sizeof buf)) > 0) out.append(buf, static_cast<std::size_t>(n));
  int err = 0;
  const char* msg = gzerror(f, &err);
  const std::string detail = msg ? msg : "";
  gzclose(f);
  if (n < 0 || err < 0) throw std::runtime_error("gzip decode failed for " + path.string() + ": " + detail);
  return out;
}

Corpus load_uci_corpus(const std::filesystem::path& docword, const std::optional<std::filesystem::path>& vocab) {
  std::istringstream dw(read_maybe_gzip(docword));
  if (!vocab) return parse_uci_bag_of_words(dw);
  std::istringstream vs(read_maybe_gzip(*vocab));
  return parse_uci_bag_of_words(dw, vs);
}

void write_uci_bag_of_words(const Corpus& c, std::ostream& docword, std::ostream& vocab) {
  std::vector<std::pair<std::uint32_t, std::uint64_t>> triples;
  std::vector<std::pair<std::uint32_t, std::uint64_t>> all;
  std::vector<std::uint64_t> doc_of;
  std::unordered_map<std::uint32_t, std::size_t> slot;
  for (std::uint32_t d = 0; d < c.doc_count(); ++d) {
    triples.clear();
    slot.clear();
    for (auto w : c.doc(d)) {
      auto [it, fresh] = slot.emplace(w, triples.size());
      if (fresh) triples.emplace_back(w, 0);
      ++triples[it->second].second;
    }
    for (const auto& t : triples) {
      all.push_back(t);
      doc_of.push_back(d);
    }
  }
  docword << c.doc_count() << '\n' << c.vocab_size() << '\n' << all.size() << '\n';
  for (std::size_t i = 0; i < all.size(); ++i) {
    docword << doc_of[i] + 1 << ' ' << all[i].first + 1 << ' ' << all[i].second << '\n';
  }
  for (const auto& w : c.vocab()) vocab << w << '\n';
}

}  // namespace warplda
