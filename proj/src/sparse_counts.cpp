#include "warplda/sparse_counts.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>

#include "warplda/error.hpp"

namespace warplda {

std::uint32_t SparseCounts::capacity_for(std::uint32_t num_topics, std::uint64_t total) noexcept {
  const std::uint64_t bound = std::min<std::uint64_t>(num_topics, 2 * total);
  // strictly larger than `bound`
  return static_cast<std::uint32_t>(std::bit_floor(bound) << 1 | (bound == 0 ? 1u : 0u));
}

void SparseCounts::reset(std::uint32_t num_topics, std::uint64_t expected_total) {
  num_topics_ = num_topics;
  const std::uint32_t cap = capacity_for(num_topics, expected_total);
  if (keys_.size() < cap) {
    keys_.assign(cap, kEmpty);
    counts_.assign(cap, 0);
  } else {
    std::fill_n(keys_.begin(), cap, kEmpty);
  }
  mask_ = cap - 1;
  occupied_ = 0;
  total_ = 0;
}

void SparseCounts::increment(std::uint32_t topic) {
  std::uint32_t s = slot_of(topic);
  while (keys_[s] != kEmpty) {
    if (keys_[s] == topic) {
      ++counts_[s];
      ++total_;
      return;
    }
    s = (s + 1) & mask_;
  }
  if (occupied_ + 2 > mask_ + 1) {
    // Counting more than the table was sized for; keep one slot free.
    grow();
    s = slot_of(topic);
    while (keys_[s] != kEmpty) s = (s + 1) & mask_;
  }
  keys_[s] = topic;
  counts_[s] = 1;
  ++occupied_;
  ++total_;
}

void SparseCounts::grow() {
  std::vector<std::uint32_t> old_keys(keys_.begin(), keys_.begin() + mask_ + 1);
  std::vector<std::uint32_t> old_counts(counts_.begin(), counts_.begin() + mask_ + 1);
  const std::uint32_t cap = (mask_ + 1) * 2;
  keys_.assign(cap, kEmpty);
  counts_.assign(cap, 0);
  mask_ = cap - 1;
  for (std::size_t i = 0; i < old_keys.size(); ++i) {
    if (old_keys[i] == kEmpty) continue;
    std::uint32_t s = slot_of(old_keys[i]);
    while (keys_[s] != kEmpty) s = (s + 1) & mask_;
    keys_[s] = old_keys[i];
    counts_[s] = old_counts[i];
  }
}

void SparseCounts::decrement(std::uint32_t topic) {
  std::uint32_t s = slot_of(topic);
  while (keys_[s] != topic) {
    if (keys_[s] == kEmpty) throw InconsistentCounts("decrement of absent topic " + std::to_string(topic));
    s = (s + 1) & mask_;
  }
  --total_;
  if (--counts_[s] > 0) return;

  // Backward-shift deletion keeps every probe chain gap-free.
  --occupied_;
  std::uint32_t hole = s;
  std::uint32_t j = s;
  while (true) {
    j = (j + 1) & mask_;
    if (keys_[j] == kEmpty) break;
    const std::uint32_t home = slot_of(keys_[j]);
    // Move keys_[j] into the hole unless its home lies cyclically in (hole, j].
    const bool stays = hole <= j ? (hole < home && home <= j) : (hole < home || home <= j);
    if (!stays) {
      keys_[hole] = keys_[j];
      counts_[hole] = counts_[j];
      hole = j;
    }
  }
  keys_[hole] = kEmpty;
  counts_[hole] = 0;
}

void SparseCounts::sorted_entries(std::vector<std::pair<std::uint32_t, std::uint32_t>>& out) const {
  out.clear();
  out.reserve(occupied_);
  for_each([&](std::uint32_t k, std::uint32_t c) { out.emplace_back(k, c); });
  std::sort(out.begin(), out.end());
}

SparseCounts counts_from_assignments(std::span<const std::uint32_t> assignments, std::uint32_t num_topics) {
  SparseCounts c(num_topics, assignments.size());
  for (auto z : assignments) {
    if (z >= num_topics) {
      throw std::out_of_range("assignment " + std::to_string(z) + " >= K=" + std::to_string(num_topics));
    }
    c.increment(z);
  }
  return c;
}

}  // namespace warplda
