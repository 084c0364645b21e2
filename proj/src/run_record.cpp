#include "latgrow/run_record.hpp"

#include <cmath>

namespace latgrow {

std::string_view stop_reason_name(StopReason r) {
  switch (r) {
    case StopReason::none: return "none";
    case StopReason::t_max: return "t_max";
    case StopReason::margin: return "margin";
    case StopReason::exhausted: return "exhausted";
    case StopReason::extinct: return "extinct";
    case StopReason::target: return "target";
    case StopReason::success: return "success";
    case StopReason::failure: return "failure";
  }
  return "?";
}

nlohmann::json RunRecord::to_json() const {
  nlohmann::json j;
  j["process"] = process;
  nlohmann::json params = nlohmann::json::object();
  for (const auto& [k, v] : parameters) params[k] = v;
  j["parameters"] = params;
  j["master_seed"] = master_seed;
  j["run_id"] = run_id;
  j["dim"] = dim;
  j["window_radius"] = window_radius;
  j["margin"] = margin;
  j["stop_reason"] = std::string(stop_reason_name(stop));
  j["stop_time"] = std::isfinite(stop_time) ? nlohmann::json(stop_time) : nlohmann::json(nullptr);
  j["notes"] = notes;
  if (!metrics.columns.empty()) {
    j["metrics"]["columns"] = metrics.columns;
    j["metrics"]["rows"] = metrics.rows;
  }
  return j;
}

}  // namespace latgrow
