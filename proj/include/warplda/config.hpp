#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace warplda {

struct TrainConfig {
  std::uint32_t topics = 0;      // K
  std::uint32_t mh_steps = 2;    // M: proposals per token per proposal type
  std::uint32_t iterations = 0;  // I
  double alpha = 0.0;            // symmetric document smoothing
  double beta = 0.01;            // word smoothing
  std::uint64_t seed = 1;
  std::uint32_t threads = 1;

  static double default_alpha(std::uint32_t topics) { return 50.0 / topics; }

  /// K topics with alpha = 50/K, beta = 0.01, M = 2.
  static TrainConfig with_defaults(std::uint32_t topics, std::uint32_t iterations) {
    TrainConfig c;
    c.topics = topics;
    c.iterations = iterations;
    c.alpha = topics ? default_alpha(topics) : 0.0;
    return c;
  }

  void validate() const {
    if (topics < 1) throw std::invalid_argument("topics (K) must be >= 1");
    if (mh_steps < 1 || mh_steps > 4095) throw std::invalid_argument("mh steps (M) must be in [1, 4095]");
    if (iterations < 1) throw std::invalid_argument("iterations must be >= 1");
    if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be > 0");
    if (!(beta > 0.0)) throw std::invalid_argument("beta must be > 0");
    if (threads < 1) throw std::invalid_argument("threads must be >= 1");
  }
};

}  // namespace warplda
