#include "warplda/alias_table.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace warplda {

template <class W>
void AliasTable::build(std::span<const std::pair<std::uint32_t, W>> weights) {
  if (weights.empty()) throw std::invalid_argument("alias table needs at least one outcome");
  const std::size_t n = weights.size();
  double total = 0.0;
  for (const auto& [id, w] : weights) {
    const double x = static_cast<double>(w);
    if (!(x > 0.0) || !std::isfinite(x)) {
      throw std::invalid_argument("alias weight for outcome " + std::to_string(id) + " must be positive and finite");
    }
    total += x;
  }
  total_ = total;

  bins_.resize(n);
  scaled_.resize(n);
  small_.clear();
  large_.clear();
  for (std::size_t i = 0; i < n; ++i) {
    scaled_[i] = static_cast<double>(weights[i].second) * static_cast<double>(n) / total;
    bins_[i] = Bin{1.0, weights[i].first, weights[i].first};
    (scaled_[i] < 1.0 ? small_ : large_).push_back(static_cast<std::uint32_t>(i));
  }
  while (!small_.empty() && !large_.empty()) {
    const auto s = small_.back();
    small_.pop_back();
    const auto l = large_.back();
    bins_[s].threshold = scaled_[s];
    bins_[s].alias = weights[l].first;
    scaled_[l] -= 1.0 - scaled_[s];
    if (scaled_[l] < 1.0) {
      large_.pop_back();
      small_.push_back(l);
    }
  }
  // Leftovers are 1 up to rounding.
  for (auto i : small_) bins_[i].threshold = 1.0;
  for (auto i : large_) bins_[i].threshold = 1.0;
}

void AliasTable::rebuild(std::span<const std::pair<std::uint32_t, double>> weights) { build(weights); }

void AliasTable::rebuild(std::span<const std::pair<std::uint32_t, std::uint32_t>> counts) { build(counts); }

std::vector<std::pair<std::uint32_t, double>> AliasTable::implied_probabilities() const {
  std::map<std::uint32_t, double> mass;
  const double per_bin = 1.0 / static_cast<double>(bins_.size());
  for (const auto& b : bins_) {
    mass[b.primary] += b.threshold * per_bin;
    if (b.threshold < 1.0) mass[b.alias] += (1.0 - b.threshold) * per_bin;
  }
  return {mass.begin(), mass.end()};
}

}  // namespace warplda
