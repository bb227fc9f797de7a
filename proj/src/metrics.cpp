#include "warplda/metrics.hpp"

#include <ostream>
#include <stdexcept>

#include "json.hpp"

namespace warplda {

std::string to_json_line(const IterationMetrics& m) {
  nlohmann::ordered_json j;
  j["iter"] = m.iteration;
  j["loglik"] = m.loglik;
  j["seconds"] = m.seconds;
  j["tokens_per_sec"] = m.tokens_per_sec;
  return j.dump();
}

IterationMetrics parse_metrics_line(const std::string& line) {
  const auto j = nlohmann::json::parse(line);
  IterationMetrics m;
  m.iteration = j.at("iter").get<std::uint32_t>();
  m.loglik = j.at("loglik").get<double>();
  m.seconds = j.at("seconds").get<double>();
  m.tokens_per_sec = j.at("tokens_per_sec").get<double>();
  return m;
}

void MetricsSink::record(const IterationMetrics& m) {
  out_ << to_json_line(m) << '\n';
  out_.flush();
  if (!out_) throw std::runtime_error("metrics: write failed");
}

}  // namespace warplda
