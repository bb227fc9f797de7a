#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "warplda/config.hpp"
#include "warplda/matrix.hpp"

namespace warplda {

/// Training state beside the token matrix. The thread count and iteration
/// budget are deliberately not stored: a checkpoint does not depend on how
/// it was scheduled.
struct Checkpoint {
  TrainConfig config;  // topics, mh_steps, alpha, beta, seed are persisted
  std::uint32_t iteration = 0;
  std::vector<std::int64_t> topic_counts;
};

/// Layout: magic "WLDACKP1", u32 K, u32 M, f64 alpha, f64 beta, u64 seed,
/// u32 iteration, K × u64 c_k, then the matrix dump (see write_matrix).
void write_checkpoint(const Checkpoint& cp, const TokenMatrix& m, std::ostream& out);

struct LoadedCheckpoint {
  Checkpoint state;
  TokenMatrix matrix;
};

/// Throws std::runtime_error on a bad magic, truncation, or a matrix whose
/// shape or topic ids disagree with the header.
LoadedCheckpoint read_checkpoint(std::istream& in);
LoadedCheckpoint read_checkpoint(const std::filesystem::path& path);

}  // namespace warplda
