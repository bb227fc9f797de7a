#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace warplda {

/// Greedy balanced partitioning: items are taken in decreasing weight order
/// (ties: lower item id first) and each goes to the bin with the smallest
/// running total (ties: lower bin id). Returns the bin of every item.
/// Throws std::invalid_argument when bins == 0.
std::vector<std::uint32_t> greedy_partition(std::span<const std::uint64_t> weights, std::uint32_t bins);

/// Random shuffle, then equal item counts per bin (sizes differ by at most one).
std::vector<std::uint32_t> static_partition(std::span<const std::uint64_t> weights, std::uint32_t bins,
                                            std::mt19937_64& rng);

/// Random shuffle, then contiguous slices of variable width: a slice is
/// closed as soon as the running total reaches its share (b+1)·total/bins.
std::vector<std::uint32_t> dynamic_partition(std::span<const std::uint64_t> weights, std::uint32_t bins,
                                             std::mt19937_64& rng);

std::vector<std::uint64_t> bin_totals(std::span<const std::uint64_t> weights,
                                      std::span<const std::uint32_t> assignment, std::uint32_t bins);

/// max(totals) / mean(totals) - 1. Throws std::invalid_argument on empty or
/// all-zero input.
double imbalance_index(std::span<const std::uint64_t> totals);

/// Owner of every row and column for a parallel sweep. Each worker visits its
/// own rows (or columns) in increasing id order.
struct PartitionPlan {
  std::uint32_t worker_count = 1;
  std::vector<std::uint32_t> row_owner;
  std::vector<std::uint32_t> column_owner;
  std::vector<std::vector<std::uint32_t>> rows_of;
  std::vector<std::vector<std::uint32_t>> columns_of;

  /// Greedy-balances rows by length and columns by term frequency.
  static PartitionPlan balanced(std::span<const std::uint64_t> row_lengths,
                                std::span<const std::uint64_t> column_lengths, std::uint32_t workers);
};

/// Zipf-like integer weights: weight of item i (1-based) is
/// max(1, round(scale / i^exponent)).
std::vector<std::uint64_t> zipf_weights(std::size_t count, double exponent, double scale = 1e7);

}  // namespace warplda
