#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <memory>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "warplda/checkpoint.hpp"
#include "warplda/corpus.hpp"
#include "warplda/likelihood.hpp"
#include "warplda/model.hpp"
#include "warplda/partition.hpp"
#include "warplda/sampler.hpp"

namespace warplda::cli {

namespace {

struct TrainArgs {
  std::string docword, vocab, metrics, checkpoint;
  std::uint32_t topics = 0, iters = 0, mh = 2, threads = 1;
  std::optional<double> alpha;
  double beta = 0.01;
  std::uint64_t seed = 1;
};

struct BenchArgs {
  std::string weights_from;
  std::vector<double> zipf;
  std::vector<std::uint32_t> workers{8, 32, 64};
  std::uint32_t shuffles = 20;
  std::uint64_t seed = 1;
};

struct TopicsArgs {
  std::string checkpoint, vocab;
  std::uint32_t top = 10;
};

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  return f;
}

std::string format_fixed(double v, int digits) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

std::string format_exact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int do_train(const TrainArgs& a, std::ostream& out) {
  const Corpus corpus = load_uci_corpus(a.docword, a.vocab.empty() ? std::nullopt
                                                                   : std::optional<std::filesystem::path>(a.vocab));
  TrainConfig cfg;
  cfg.topics = a.topics;
  cfg.iterations = a.iters;
  cfg.mh_steps = a.mh;
  cfg.alpha = a.alpha ? *a.alpha : (a.topics ? TrainConfig::default_alpha(a.topics) : 0.0);
  cfg.beta = a.beta;
  cfg.seed = a.seed;
  cfg.threads = a.threads;
  cfg.validate();

  std::ofstream metrics_file;
  std::unique_ptr<MetricsSink> sink;
  if (!a.metrics.empty()) {
    metrics_file = open_output(a.metrics);
    sink = std::make_unique<MetricsSink>(metrics_file);
  }
  std::ofstream checkpoint_file;
  if (!a.checkpoint.empty()) checkpoint_file = open_output(a.checkpoint);

  const auto stats = corpus_stats(corpus);
  out << "corpus D=" << stats.doc_count << " V=" << stats.vocab_size << " T=" << stats.token_total << '\n';
  try {
    Trainer trainer(corpus, cfg);
    IterationMetrics last;
    for (std::uint32_t it = 0; it < cfg.iterations; ++it) {
      last = trainer.step();
      if (sink) sink->record(last);
    }
    if (checkpoint_file.is_open()) {
      trainer.save_checkpoint(checkpoint_file);
      checkpoint_file.flush();
      if (!checkpoint_file) throw std::runtime_error("checkpoint write failed: " + a.checkpoint);
    }
    out << "iterations=" << last.iteration << " loglik=" << format_exact(last.loglik) << '\n';
  } catch (const std::bad_alloc&) {
    const double gib = estimated_training_bytes(corpus.token_total(), cfg.mh_steps) / double(1ull << 30);
    throw std::runtime_error("out of memory: about " + format_fixed(gib, 2) + " GiB needed; lower --mh or split the corpus");
  }
  return 0;
}

int do_eval(const std::string& path, std::ostream& out) {
  const auto cp = read_checkpoint(path);
  const auto& cfg = cp.state.config;
  const double ll = log_joint_likelihood(cp.matrix, cfg.topics, cfg.alpha, cfg.beta);
  out << "iteration=" << cp.state.iteration << " loglik=" << format_exact(ll) << '\n';
  return 0;
}

int do_partition_bench(const BenchArgs& a, std::ostream& out) {
  std::vector<std::uint64_t> weights;
  if (!a.weights_from.empty()) {
    weights = load_uci_corpus(a.weights_from, std::nullopt).term_frequencies();
  } else if (!a.zipf.empty()) {
    const double n = a.zipf[0];
    if (!(n >= 1) || n != std::floor(n)) throw std::invalid_argument("--zipf N must be a positive integer");
    weights = zipf_weights(static_cast<std::size_t>(n), a.zipf[1]);
  } else {
    throw std::invalid_argument("one of --weights-from or --zipf is required");
  }
  if (a.shuffles == 0) throw std::invalid_argument("--shuffles must be >= 1");

  out << "workers\tgreedy\tdynamic\tstatic\n";
  for (auto p : a.workers) {
    if (p == 0) throw std::invalid_argument("--workers entries must be >= 1");
    const double greedy = imbalance_index(bin_totals(weights, greedy_partition(weights, p), p));
    std::mt19937_64 rng(a.seed);
    double dynamic = 0.0, fixed = 0.0;
    for (std::uint32_t s = 0; s < a.shuffles; ++s) {
      dynamic += imbalance_index(bin_totals(weights, dynamic_partition(weights, p, rng), p));
      fixed += imbalance_index(bin_totals(weights, static_partition(weights, p, rng), p));
    }
    out << p << '\t' << format_fixed(greedy, 6) << '\t' << format_fixed(dynamic / a.shuffles, 6) << '\t'
        << format_fixed(fixed / a.shuffles, 6) << '\n';
  }
  return 0;
}

std::vector<std::string> read_vocab_lines(const std::string& path) {
  std::istringstream in(read_maybe_gzip(path));
  std::vector<std::string> words;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) words.push_back(line);
  }
  return words;
}

int do_topics(const TopicsArgs& a, std::ostream& out) {
  const auto cp = read_checkpoint(a.checkpoint);
  const auto& cfg = cp.state.config;
  const auto model = extract_model(collect_counts(cp.matrix, cfg.topics), cfg.alpha, cfg.beta);
  std::vector<std::string> vocab;
  if (!a.vocab.empty()) {
    vocab = read_vocab_lines(a.vocab);
    if (vocab.size() != model.vocab_size()) {
      throw std::invalid_argument("vocab has " + std::to_string(vocab.size()) + " words, checkpoint has V=" +
                                  std::to_string(model.vocab_size()));
    }
  }
  for (std::uint32_t k = 0; k < model.topics(); ++k) {
    for (const auto& [w, phi] : model.top_words(k, a.top)) {
      out << k << '\t' << (vocab.empty() ? std::to_string(w) : vocab[w]) << '\t' << format_fixed(phi, 6) << '\n';
    }
  }
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"WarpLDA topic-model trainer"};
  app.name("warplda");
  app.require_subcommand(1, 1);

  TrainArgs train;
  auto* t = app.add_subcommand("train", "Train a model on a UCI bag-of-words corpus");
  t->add_option("--docword", train.docword, "docword file (plain or gzip)")->required()->check(CLI::ExistingFile);
  t->add_option("--vocab", train.vocab, "vocab file, one word per line")->check(CLI::ExistingFile);
  t->add_option("--topics", train.topics, "number of topics K")->required();
  t->add_option("--iters", train.iters, "number of iterations")->required();
  t->add_option("--mh", train.mh, "MH steps per proposal type (M)")->capture_default_str();
  t->add_option("--alpha", train.alpha, "document smoothing (default 50/K)");
  t->add_option("--beta", train.beta, "word smoothing")->capture_default_str();
  t->add_option("--seed", train.seed, "random seed")->capture_default_str();
  t->add_option("--threads", train.threads, "worker threads")->envname("WARPLDA_THREADS")->capture_default_str();
  t->add_option("--metrics", train.metrics, "write per-iteration JSON lines here");
  t->add_option("--checkpoint", train.checkpoint, "write the final state here");

  std::string eval_path;
  auto* e = app.add_subcommand("eval", "Recompute the log joint likelihood of a checkpoint");
  e->add_option("--checkpoint", eval_path, "checkpoint file")->required()->check(CLI::ExistingFile);

  BenchArgs bench;
  auto* b = app.add_subcommand("partition-bench", "Compare greedy, dynamic and static partition imbalance");
  auto* wf = b->add_option("--weights-from", bench.weights_from, "docword file; term frequencies are the weights")
                 ->check(CLI::ExistingFile);
  auto* zf = b->add_option("--zipf", bench.zipf, "N s: N Zipf weights with exponent s")->expected(2);
  wf->excludes(zf);
  zf->excludes(wf);
  b->add_option("--workers", bench.workers, "comma-separated worker counts")->delimiter(',')->capture_default_str();
  b->add_option("--shuffles", bench.shuffles, "random shuffles averaged for dynamic/static")->capture_default_str();
  b->add_option("--seed", bench.seed, "random seed")->capture_default_str();

  TopicsArgs topics;
  auto* tp = app.add_subcommand("topics", "Print the top words of every topic as TSV");
  tp->add_option("--checkpoint", topics.checkpoint, "checkpoint file")->required()->check(CLI::ExistingFile);
  tp->add_option("--top", topics.top, "words per topic")->capture_default_str();
  tp->add_option("--vocab", topics.vocab, "vocab file for word strings")->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& ex) {
    if (ex.get_exit_code() == 0) return app.exit(ex, out, err);
    err << "error: " << ex.what() << '\n';
    return ex.get_exit_code();
  }

  try {
    if (t->parsed()) return do_train(train, out);
    if (e->parsed()) return do_eval(eval_path, out);
    if (b->parsed()) return do_partition_bench(bench, out);
    if (tp->parsed()) return do_topics(topics, out);
  } catch (const std::exception& ex) {
    std::string msg = ex.what();
    for (auto& c : msg) if (c == '\n') c = ' ';
    err << "error: " << msg << '\n';
    return 1;
  }
  return 1;
}

}  // namespace warplda::cli
