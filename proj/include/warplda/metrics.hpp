#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

namespace warplda {

struct IterationMetrics {
  std::uint32_t iteration = 0;
  double loglik = 0.0;
  double seconds = 0.0;
  double tokens_per_sec = 0.0;
};

/// JSON-lines writer: one object per iteration with the fields
/// iter, loglik, seconds, tokens_per_sec. Flushes after every record.
class MetricsSink {
 public:
  explicit MetricsSink(std::ostream& out) : out_(out) {}

  /// Throws std::runtime_error when the underlying stream fails.
  void record(const IterationMetrics& m);

 private:
  std::ostream& out_;
};

inline void record_metrics(MetricsSink& sink, const IterationMetrics& m) { sink.record(m); }

std::string to_json_line(const IterationMetrics& m);
/// Parses one record produced by to_json_line.
IterationMetrics parse_metrics_line(const std::string& line);

}  // namespace warplda
