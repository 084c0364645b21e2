#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace latgrow {

enum class StopReason {
  none,
  t_max,
  margin,     // a growth front came within the margin of the window edge
  exhausted,  // nothing left that can change the state
  extinct,    // type 1 can no longer grow
  target,     // requested radius or condition reached
  success,
  failure,
};

std::string_view stop_reason_name(StopReason r);

struct MetricSeries {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// Seeded-run provenance plus metric time series.
struct RunRecord {
  std::string process;
  std::vector<std::pair<std::string, std::string>> parameters;
  std::uint64_t master_seed = 0;
  std::uint64_t run_id = 0;
  int dim = 0;
  std::int64_t window_radius = 0;
  std::int64_t margin = 0;
  StopReason stop = StopReason::none;
  double stop_time = 0.0;
  MetricSeries metrics;
  std::vector<std::string> notes;

  void set(std::string key, std::string value) { parameters.emplace_back(std::move(key), std::move(value)); }
  nlohmann::json to_json() const;
};

}  // namespace latgrow
