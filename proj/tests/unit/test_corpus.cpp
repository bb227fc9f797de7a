#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <zlib.h>

#include "warplda/corpus.hpp"
#include "warplda/error.hpp"

using namespace warplda;

namespace {

Corpus parse(const std::string& docword, const std::string& vocab) {
  std::istringstream d(docword), v(vocab);
  return parse_uci_bag_of_words(d, v);
}

std::uint64_t parse_error_line(const std::string& docword, const std::string& vocab) {
  try {
    parse(docword, vocab);
  } catch (const ParseError& e) {
    return e.line();
  }
  ADD_FAILURE() << "no ParseError for input:\n" << docword;
  return ~0ull;
}

}  // namespace

TEST(Corpus, ExpandsTriplesInFileOrder) {
  const auto c = parse("2\n2\n2\n1 1 1\n2 2 3\n", "a\nb\n");
  EXPECT_EQ(c.doc_count(), 2u);
  EXPECT_EQ(c.vocab_size(), 2u);
  EXPECT_EQ(c.token_total(), 4u);
  EXPECT_EQ(std::vector<std::uint32_t>(c.doc(0).begin(), c.doc(0).end()), std::vector<std::uint32_t>{0});
  EXPECT_EQ(std::vector<std::uint32_t>(c.doc(1).begin(), c.doc(1).end()), (std::vector<std::uint32_t>{1, 1, 1}));
  EXPECT_EQ(c.vocab()[1], "b");
}

TEST(Corpus, SingleToken) {
  const auto c = parse("1\n1\n1\n1 1 1\n", "x\n");
  EXPECT_EQ(c.token_total(), 1u);
  const auto s = corpus_stats(c);
  EXPECT_EQ(s.doc_count, 1u);
  EXPECT_EQ(s.token_total, 1u);
  EXPECT_EQ(s.mean_doc_len_rounded(), 1u);
  EXPECT_DOUBLE_EQ(s.mean_doc_len(), 1.0);
}

TEST(Corpus, TokenTotalMatchesLineByLineSum) {
  std::mt19937_64 rng(7);
  const std::uint32_t D = 10, V = 30;
  std::ostringstream body;
  std::uint64_t nnz = 0;
  for (std::uint32_t d = 1; d <= D; ++d) {
    for (std::uint32_t w = 1; w <= V; ++w) {
      if (rng() % 3 == 0) {
        body << d << ' ' << w << ' ' << 1 + rng() % 9 << '\n';
        ++nnz;
      }
    }
  }
  std::ostringstream vocab;
  for (std::uint32_t w = 0; w < V; ++w) vocab << "word" << w << '\n';
  const std::string text = std::to_string(D) + "\n" + std::to_string(V) + "\n" + std::to_string(nnz) + "\n" + body.str();

  std::uint64_t expected = 0;
  std::istringstream lines(body.str());
  for (std::string line; std::getline(lines, line);) {
    unsigned a, b, cnt;
    ASSERT_EQ(std::sscanf(line.c_str(), "%u %u %u", &a, &b, &cnt), 3);
    expected += cnt;
  }
  const auto c = parse(text, vocab.str());
  EXPECT_EQ(c.token_total(), expected);

  // Stats against an independent recount.
  std::uint64_t recount = 0;
  for (std::uint32_t d = 0; d < c.doc_count(); ++d) recount += c.doc(d).size();
  const auto s = corpus_stats(c);
  EXPECT_EQ(s.token_total, recount);
  EXPECT_EQ(s.doc_count, D);
  EXPECT_EQ(s.vocab_size, V);
  EXPECT_EQ(s.mean_numerator(), recount);
  EXPECT_EQ(s.mean_denominator(), D);
}

TEST(Corpus, RoundTripRecoversTriples) {
  const std::string docword = "3\n4\n5\n1 2 2\n1 4 1\n2 1 3\n3 3 1\n3 2 4\n";
  const auto c = parse(docword, "a\nb\nc\nd\n");
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> cells;
  for (std::uint32_t d = 0; d < c.doc_count(); ++d) {
    for (auto w : c.doc(d)) ++cells[{d + 1, w + 1}];
  }
  const std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> expected{
      {{1, 2}, 2}, {{1, 4}, 1}, {{2, 1}, 3}, {{3, 3}, 1}, {{3, 2}, 4}};
  EXPECT_EQ(cells, expected);

  std::ostringstream dw, vv;
  write_uci_bag_of_words(c, dw, vv);
  EXPECT_EQ(parse(dw.str(), vv.str()), c);
}

TEST(Corpus, ParseIsDeterministic) {
  const std::string docword = "2\n3\n3\n2 3 2\n1 1 1\n2 1 1\n";
  EXPECT_EQ(parse(docword, "a\nb\nc\n"), parse(docword, "a\nb\nc\n"));
}

TEST(Corpus, NyTimesScaleStats) {
  // UCI NYTimes: D = 300,000 documents, 99,542,125 tokens, V = 102,660.
  const CorpusStats s{300000, 102660, 99542125};
  EXPECT_EQ(s.mean_doc_len_rounded(), 332u);
  EXPECT_NEAR(s.mean_doc_len(), 331.8, 0.05);
}

TEST(Corpus, ReportsLineNumbers) {
  EXPECT_EQ(parse_error_line("2\nx\n2\n1 1 1\n2 2 3\n", "a\nb\n"), 2u);
  EXPECT_EQ(parse_error_line("2\n2\n2\n1 1 1\n3 2 3\n", "a\nb\n"), 5u);   // doc id out of range
  EXPECT_EQ(parse_error_line("2\n2\n2\n1 1 1\n2 9 3\n", "a\nb\n"), 5u);   // word id out of range
  EXPECT_EQ(parse_error_line("2\n2\n2\n1 1 0\n2 2 3\n", "a\nb\n"), 4u);   // zero count
  EXPECT_EQ(parse_error_line("2\n2\n2\n1 1 -1\n2 2 3\n", "a\nb\n"), 4u);  // negative count
  EXPECT_EQ(parse_error_line("2\n2\n2\n1 1\n2 2 3\n", "a\nb\n"), 4u);     // short triple
  EXPECT_GT(parse_error_line("2\n2\n3\n1 1 1\n2 2 3\n", "a\nb\n"), 0u);   // too few triples
  EXPECT_THROW(parse("2\n2\n2\n1 1 1\n2 2 3\n", "a\n"), ParseError);       // vocab length != W
  EXPECT_THROW(parse("2\n2\n2\n1 1 1\n2 2 3\n", "a\na\n"), ParseError);    // duplicate word
}

TEST(Corpus, ConstructorRejectsBadIds) {
  EXPECT_THROW(Corpus({{0, 2}}, {"a", "b"}), std::invalid_argument);
  EXPECT_THROW(Corpus({{0}}, {"a", "a"}), std::invalid_argument);
}

TEST(Corpus, ReadsGzipByMagic) {
  const auto dir = std::filesystem::temp_directory_path();
  const auto plain = dir / "warplda_corpus_plain.txt";
  const auto gz = dir / "warplda_corpus.txt.gz";
  const std::string docword = "2\n2\n2\n1 1 1\n2 2 3\n";
  std::ofstream(plain) << docword;
  gzFile f = gzopen(gz.c_str(), "wb");
  ASSERT_NE(f, nullptr);
  gzwrite(f, docword.data(), static_cast<unsigned>(docword.size()));
  gzclose(f);
  EXPECT_EQ(read_maybe_gzip(gz), docword);
  EXPECT_EQ(load_uci_corpus(gz), load_uci_corpus(plain));
  EXPECT_EQ(load_uci_corpus(plain).vocab()[1], "1");  // 0-based decimal ids
}
