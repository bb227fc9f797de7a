#include "warplda/checkpoint.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "warplda/io.hpp"

namespace warplda {

namespace {
constexpr char kCheckpointMagic[8] = {'W', 'L', 'D', 'A', 'C', 'K', 'P', '1'};
}

void write_checkpoint(const Checkpoint& cp, const TokenMatrix& m, std::ostream& out) {
  if (cp.topic_counts.size() != cp.config.topics) throw std::invalid_argument("checkpoint: c_k length differs from K");
  out.write(kCheckpointMagic, sizeof kCheckpointMagic);
  io::put_u32(out, cp.config.topics);
  io::put_u32(out, cp.config.mh_steps);
  io::put_f64(out, cp.config.alpha);
  io::put_f64(out, cp.config.beta);
  io::put_u64(out, cp.config.seed);
  io::put_u32(out, cp.iteration);
  for (auto c : cp.topic_counts) io::put_u64(out, static_cast<std::uint64_t>(c));
  write_matrix(m, out);
  if (!out) throw std::runtime_error("checkpoint: write failed");
}

LoadedCheckpoint read_checkpoint(std::istream& in) {
  char magic[8];
  if (!in.read(magic, sizeof magic) || !std::equal(magic, magic + 8, kCheckpointMagic)) {
    throw std::runtime_error("checkpoint: bad magic");
  }
  LoadedCheckpoint out;
  auto& cfg = out.state.config;
  cfg.topics = io::get_u32(in);
  cfg.mh_steps = io::get_u32(in);
  cfg.alpha = io::get_f64(in);
  cfg.beta = io::get_f64(in);
  cfg.seed = io::get_u64(in);
  out.state.iteration = io::get_u32(in);
  if (cfg.topics == 0) throw std::runtime_error("checkpoint: K is zero");
  out.state.topic_counts.resize(cfg.topics);
  for (auto& c : out.state.topic_counts) c = static_cast<std::int64_t>(io::get_u64(in));
  out.matrix = read_matrix(in);

  const auto& m = out.matrix;
  if (m.width() != cfg.mh_steps + 1) throw std::runtime_error("checkpoint: payload width disagrees with M");
  const auto payload = m.payload();
  if (std::any_of(payload.begin(), payload.end(), [&](std::uint32_t t) { return t >= cfg.topics; })) {
    throw std::runtime_error("checkpoint: stored topic id >= K");
  }
  const auto sum = std::accumulate(out.state.topic_counts.begin(), out.state.topic_counts.end(), std::int64_t{0});
  if (sum != static_cast<std::int64_t>(m.entry_total())) throw std::runtime_error("checkpoint: c_k does not sum to T");
  return out;
}

LoadedCheckpoint read_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint " + path.string());
  return read_checkpoint(in);
}

}  // namespace warplda
