#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "inspectfdi/fdi.hpp"

namespace inspectfdi {

/// One simulation tick in the report. Per-agent vectors align with
/// RunReport::agent_ids. Metric/threshold/ratio refresh at diagnostic
/// ticks and carry forward in between; `ratio` is an in-memory diagnostic
/// (dH_actual / dH_pred) and is not serialized.
struct RunRow {
  double t = 0.0;
  double h_global = 0.0;
  double h_global_pred = 0.0;
  std::vector<double> h_agent;
  std::vector<double> h_agent_pred;
  std::vector<double> metric;
  std::vector<double> threshold;
  std::vector<double> ratio;
};

struct FaultSummary {
  std::string fault_id;
  std::string expected_signature;  // "Hm_<agent>>0"
  std::string observed_behavior;   // improved / degraded / nominal
  bool detected = false;
  std::optional<double> latency;   // s, empty when undetected
};

struct RunReport {
  std::vector<int> agent_ids;  // ascending
  std::vector<RunRow> rows;
  std::vector<Detection> detections;  // latched, detection-time order
  std::vector<FaultSummary> summary;  // config fault order
  std::optional<GlobalDetection> global;
};

/// Round-trip-safe fixed formatting (17 significant digits) so equal seeds
/// give byte-identical files.
std::string format_double(double value);

/// Writes timeseries.csv, detections.csv and summary.csv into `directory`
/// (created if needed). Headers and column order are fixed:
///   timeseries.csv: t,H,H_pred,H_<id>,H_<id>_pred,Hm_<id>,tau_<id>,...
///   detections.csv: agent_id,t_detect,metric,threshold,classification,latency
///   summary.csv:    fault_id,expected_signature,observed_behavior,detected,latency
/// Throws ReportError naming the path on I/O failure.
void write_report(const RunReport& report, const std::filesystem::path& directory);

}  // namespace inspectfdi
