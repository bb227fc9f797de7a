#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "warplda/rng.hpp"

namespace warplda {

/// Walker/Vose alias table over an arbitrary set of outcome ids. One bin per
/// outcome; every bin is chosen with equal probability and holds at most two
/// outcomes split by a threshold. Drawing consumes exactly two uniform
/// values: one picks the bin, one picks the side.
class AliasTable {
 public:
  AliasTable() = default;

  /// Throws std::invalid_argument on empty input or a weight that is not
  /// positive and finite.
  explicit AliasTable(std::span<const std::pair<std::uint32_t, double>> weights) { rebuild(weights); }

  void rebuild(std::span<const std::pair<std::uint32_t, double>> weights);
  /// Integer-weighted variant used for topic counts.
  void rebuild(std::span<const std::pair<std::uint32_t, std::uint32_t>> counts);

  std::uint32_t bin_count() const noexcept { return static_cast<std::uint32_t>(bins_.size()); }
  bool empty() const noexcept { return bins_.empty(); }
  /// Sum of the weights the table was built from.
  double total_weight() const noexcept { return total_; }

  std::uint32_t draw(std::uint64_t bin_bits, std::uint64_t side_bits) const noexcept {
    const Bin& b = bins_[uniform_index(bin_bits, bins_.size())];
    return uniform01(side_bits) < b.threshold ? b.primary : b.alias;
  }

  template <class Urbg>
  std::uint32_t operator()(Urbg& g) const {
    const std::uint64_t bin_bits = g();
    const std::uint64_t side_bits = g();
    return draw(bin_bits, side_bits);
  }

  /// Per-outcome sampling probability implied by the table layout, in
  /// increasing outcome-id order. Used to verify construction.
  std::vector<std::pair<std::uint32_t, double>> implied_probabilities() const;

 private:
  struct Bin {
    double threshold;
    std::uint32_t primary;
    std::uint32_t alias;
  };

  template <class W>
  void build(std::span<const std::pair<std::uint32_t, W>> weights);

  std::vector<Bin> bins_;
  std::vector<double> scaled_;
  std::vector<std::uint32_t> small_;
  std::vector<std::uint32_t> large_;
  double total_ = 0.0;
};

/// Free-function form of drawing, for symmetry with the proposal samplers.
template <class Urbg>
std::uint32_t alias_draw(const AliasTable& t, Urbg& g) {
  return t(g);
}

}  // namespace warplda
