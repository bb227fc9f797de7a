#pragma once

#include <cstdint>
#include <limits>

namespace warplda {

enum class Phase : std::uint8_t { kInit = 0, kWord = 1, kDocument = 2 };
enum class Purpose : std::uint8_t { kAssign = 0, kAccept = 1, kPropose = 2 };

/// Coordinates of one random value. Every draw made by the sampler is
/// addressed by the token it belongs to, never by visiting order, so the
/// same key yields the same value under any schedule or thread count.
struct RngKey {
  std::uint64_t seed = 0;
  std::uint32_t iteration = 0;
  Phase phase = Phase::kInit;
  /// Position of the token in the column-major entry store.
  std::uint64_t token = 0;
  Purpose purpose = Purpose::kAssign;
  /// Proposal slot / MH step index. Must be < 4096.
  std::uint16_t slot = 0;
  std::uint16_t counter = 0;
};

/// Pure function of the key: a hashed counter-based generator built from
/// three rounds of the murmur3 64-bit finalizer.
std::uint64_t rng_at(const RngKey& key) noexcept;

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, n) by multiply-high (bias below 2^-32 for n < 2^32).
inline std::uint32_t uniform_index(std::uint64_t bits, std::uint64_t n) noexcept {
  return static_cast<std::uint32_t>((static_cast<unsigned __int128>(bits) * n) >> 64);
}

/// UniformRandomBitGenerator over successive counters of one key.
class KeyedStream {
 public:
  using result_type = std::uint64_t;

  explicit KeyedStream(const RngKey& key) noexcept : key_(key) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    auto v = rng_at(key_);
    ++key_.counter;
    return v;
  }

  std::uint16_t consumed() const noexcept { return key_.counter; }

 private:
  RngKey key_;
};

}  // namespace warplda
