#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace warplda {

/// Topic counts of one document or word: an open-addressing table with
/// linear probing, sized to the smallest power of two strictly greater than
/// min{K, 2L}. Zero counts are never stored; a slot whose count drops to
/// zero is removed with backward-shift deletion, so the table always holds
/// exactly the distinct topics present and the load factor stays <= 1/2
/// (or the table can hold all K topics).
///
/// The storage is reused across `reset` calls, which is how sweeps keep one
/// table per worker instead of allocating per row.
class SparseCounts {
 public:
  SparseCounts() = default;
  SparseCounts(std::uint32_t num_topics, std::uint64_t expected_total) { reset(num_topics, expected_total); }

  /// Clears the table and resizes it for `expected_total` assignments.
  void reset(std::uint32_t num_topics, std::uint64_t expected_total);

  static std::uint32_t capacity_for(std::uint32_t num_topics, std::uint64_t total) noexcept;

  void increment(std::uint32_t topic);
  /// Throws InconsistentCounts if the topic is absent.
  void decrement(std::uint32_t topic);

  std::uint32_t get(std::uint32_t topic) const noexcept {
    std::uint32_t s = slot_of(topic);
    while (keys_[s] != kEmpty) {
      if (keys_[s] == topic) return counts_[s];
      s = (s + 1) & mask_;
    }
    return 0;
  }
  std::uint32_t operator[](std::uint32_t topic) const noexcept { return get(topic); }

  std::uint32_t num_topics() const noexcept { return num_topics_; }
  std::uint32_t capacity() const noexcept { return mask_ + 1; }
  /// Number of distinct topics with a non-zero count (K_d or K_w).
  std::uint32_t distinct() const noexcept { return occupied_; }
  std::uint64_t total() const noexcept { return total_; }

  template <class F>
  void for_each(F&& f) const {
    for (std::uint32_t s = 0; s <= mask_; ++s) {
      if (keys_[s] != kEmpty) f(keys_[s], counts_[s]);
    }
  }

  /// Non-zero (topic, count) pairs in increasing topic order.
  void sorted_entries(std::vector<std::pair<std::uint32_t, std::uint32_t>>& out) const;

 private:
  static constexpr std::uint32_t kEmpty = 0xffffffffu;

  std::uint32_t slot_of(std::uint32_t topic) const noexcept {
    std::uint32_t h = topic * 0x9e3779b1u;
    return (h ^ (h >> 15)) & mask_;
  }

  void grow();

  std::vector<std::uint32_t> keys_{kEmpty};
  std::vector<std::uint32_t> counts_{0};
  std::uint32_t mask_ = 0;
  std::uint32_t num_topics_ = 0;
  std::uint32_t occupied_ = 0;
  std::uint64_t total_ = 0;
};

/// Counts the multiplicity of every topic in `assignments`.
/// Throws std::out_of_range when an assignment is >= num_topics.
SparseCounts counts_from_assignments(std::span<const std::uint32_t> assignments, std::uint32_t num_topics);

}  // namespace warplda
