#pragma once

#include <cstdint>
#include <span>

#include "warplda/matrix.hpp"
#include "warplda/model.hpp"

namespace warplda {

class DenseCounts;

/// ln Γ(x) for x > 0.
double log_gamma(double x);

/// Log joint likelihood log p(W, Z | alpha, beta) of a topic assignment:
///   sum_d [lnΓ(Kα) - lnΓ(Kα + L_d) + sum_k (lnΓ(α + C_dk) - lnΓ(α))]
/// + sum_k [lnΓ(Vβ) - lnΓ(Vβ + C_k) + sum_w (lnΓ(β + C_wk) - lnΓ(β))]
/// Zero counts contribute nothing and are skipped.
///
/// The terms are fed one row at a time; the sum is taken in call order, so a
/// fixed call order gives a bit-reproducible result.
class LikelihoodAccumulator {
 public:
  LikelihoodAccumulator(std::uint32_t topics, std::uint32_t vocab_size, double alpha, double beta);

  void add_doc_count(std::uint64_t count);       // one non-zero C_dk
  void end_doc(std::uint64_t doc_length);        // closes a document of length L_d
  void add_word_count(std::uint64_t count);      // one non-zero C_wk
  void add_topic_total(std::int64_t topic_total);  // one C_k (any value >= 0)

  double value() const noexcept { return sum_; }

 private:
  double alpha_, beta_, alpha_bar_, beta_bar_;
  double lg_alpha_, lg_beta_, lg_alpha_bar_, lg_beta_bar_;
  double sum_ = 0.0;
};

/// Throws std::invalid_argument for a negative count.
double log_joint_likelihood(const ModelCounts& counts, double alpha, double beta);
double log_joint_likelihood(const DenseCounts& counts, double alpha, double beta);
/// Recounts from the assignments stored in a token matrix.
double log_joint_likelihood(const TokenMatrix& m, std::uint32_t topics, double alpha, double beta);

}  // namespace warplda
