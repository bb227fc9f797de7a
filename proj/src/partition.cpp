#include "warplda/partition.hpp"

#include <cmath>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <utility>

namespace warplda {

namespace {

void require_bins(std::uint32_t bins) {
  if (bins == 0) throw std::invalid_argument("partition needs at least one bin");
}

std::vector<std::uint32_t> shuffled_order(std::size_t n, std::mt19937_64& rng) {
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::shuffle(order.begin(), order.end(), rng);
  return order;
}

}  // namespace

std::vector<std::uint32_t> greedy_partition(std::span<const std::uint64_t> weights, std::uint32_t bins) {
  require_bins(bins);
  std::vector<std::uint32_t> order(weights.size());
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return weights[a] > weights[b]; });

  using Load = std::pair<std::uint64_t, std::uint32_t>;  // (total, bin)
  std::priority_queue<Load, std::vector<Load>, std::greater<>> lightest;
  for (std::uint32_t b = 0; b < bins; ++b) lightest.emplace(0, b);

  std::vector<std::uint32_t> owner(weights.size());
  for (auto item : order) {
    auto [total, bin] = lightest.top();
    lightest.pop();
    owner[item] = bin;
    lightest.emplace(total + weights[item], bin);
  }
  return owner;
}

std::vector<std::uint32_t> static_partition(std::span<const std::uint64_t> weights, std::uint32_t bins,
                                            std::mt19937_64& rng) {
  require_bins(bins);
  const auto order = shuffled_order(weights.size(), rng);
  std::vector<std::uint32_t> owner(weights.size());
  const std::uint64_t n = weights.size();
  for (std::uint64_t i = 0; i < n; ++i) owner[order[i]] = static_cast<std::uint32_t>(i * bins / n);
  return owner;
}

std::vector<std::uint32_t> dynamic_partition(std::span<const std::uint64_t> weights, std::uint32_t bins,
                                             std::mt19937_64& rng) {
  require_bins(bins);
  const auto order = shuffled_order(weights.size(), rng);
  const std::uint64_t total = std::accumulate(weights.begin(), weights.end(), std::uint64_t{0});
  std::vector<std::uint32_t> owner(weights.size());
  std::uint32_t bin = 0;
  std::uint64_t running = 0;
  for (auto item : order) {
    owner[item] = bin;
    running += weights[item];
    // running / total >= (bin + 1) / bins, in integers
    while (bin + 1 < bins && static_cast<unsigned __int128>(running) * bins >=
                                 static_cast<unsigned __int128>(bin + 1) * total) {
      ++bin;
    }
  }
  return owner;
}

std::vector<std::uint64_t> bin_totals(std::span<const std::uint64_t> weights,
                                      std::span<const std::uint32_t> assignment, std::uint32_t bins) {
  std::vector<std::uint64_t> totals(bins, 0);
  for (std::size_t i = 0; i < weights.size(); ++i) totals.at(assignment[i]) += weights[i];
  return totals;
}

double imbalance_index(std::span<const std::uint64_t> totals) {
  if (totals.empty()) throw std::invalid_argument("imbalance index of zero bins");
  const std::uint64_t sum = std::accumulate(totals.begin(), totals.end(), std::uint64_t{0});
  if (sum == 0) throw std::invalid_argument("imbalance index of all-zero bins");
  const std::uint64_t largest = *std::max_element(totals.begin(), totals.end());
  // largest / (sum / n) - 1 = (largest·n - sum) / sum
  return static_cast<double>(largest * totals.size() - sum) / static_cast<double>(sum);
}

PartitionPlan PartitionPlan::balanced(std::span<const std::uint64_t> row_lengths,
                                      std::span<const std::uint64_t> column_lengths, std::uint32_t workers) {
  PartitionPlan plan;
  plan.worker_count = workers;
  plan.row_owner = greedy_partition(row_lengths, workers);
  plan.column_owner = greedy_partition(column_lengths, workers);
  plan.rows_of.assign(workers, {});
  plan.columns_of.assign(workers, {});
  for (std::uint32_t d = 0; d < plan.row_owner.size(); ++d) plan.rows_of[plan.row_owner[d]].push_back(d);
  for (std::uint32_t w = 0; w < plan.column_owner.size(); ++w) plan.columns_of[plan.column_owner[w]].push_back(w);
  return plan;
}

std::vector<std::uint64_t> zipf_weights(std::size_t count, double exponent, double scale) {
  std::vector<std::uint64_t> w(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double v = std::round(scale / std::pow(static_cast<double>(i + 1), exponent));
    w[i] = v < 1.0 ? 1 : static_cast<std::uint64_t>(v);
  }
  return w;
}

}  // namespace warplda
