#include "warplda/rng.hpp"

namespace warplda {

namespace {

constexpr std::uint64_t fmix64(std::uint64_t k) noexcept {
  k ^= k >> 33;
  k *= 0xff51afd7ed558ccdULL;
  k ^= k >> 33;
  k *= 0xc4ceb9fe1a85ec53ULL;
  k ^= k >> 33;
  return k;
}

}  // namespace

std::uint64_t rng_at(const RngKey& key) noexcept {
  // iteration:32 | phase:2 | purpose:2 | slot:12 | counter:16
  const std::uint64_t tag = (static_cast<std::uint64_t>(key.iteration) << 32) |
                            (static_cast<std::uint64_t>(key.phase) & 3u) << 30 |
                            (static_cast<std::uint64_t>(key.purpose) & 3u) << 28 |
                            (static_cast<std::uint64_t>(key.slot) & 0xfffu) << 16 | key.counter;
  std::uint64_t h = fmix64(key.seed ^ 0x9e3779b97f4a7c15ULL);
  h = fmix64(h ^ key.token);
  h = fmix64(h ^ tag);
  return h;
}

}  // namespace warplda
