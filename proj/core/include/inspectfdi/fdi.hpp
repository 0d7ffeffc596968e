#pragma once

#include <Eigen/Core>

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "inspectfdi/rng.hpp"

namespace inspectfdi {

/// Everything the monitor knows about one agent at a diagnostic tick:
/// the realized contribution at the window anchor (H_i(t - dt)), the
/// realized and twin-predicted contributions at t, and the corresponding
/// visible sets. h_actual may be NaN when the realized value is not yet
/// known (assignment-time threshold precomputation).
struct AgentWindowRecord {
  int agent_id = 0;
  double h_prev = 0.0;
  double h_actual = 0.0;
  double h_pred = 0.0;
  std::vector<int> visible_pred;
  std::vector<int> visible_actual;
};

enum class Classification { nominal, degraded, improved };
const char* to_string(Classification c);

/// Metric |1 - dH_actual/dH_pred|. `degenerate` marks the case where the
/// predicted change sits under the non-degeneracy floor while the actual
/// change does not; such a tick is flagged straight to detection.
struct MetricValue {
  double value = 0.0;
  bool degenerate = false;
};

struct FdiConfig {
  double window = 0.0;          // s; metric anchor spacing
  double tick = 10.0;           // s; diagnostic cadence within the window
  double epsilon = 0.03490658503988659;  // rad; threshold-sampling cone (2 deg)
  int threshold_samples = 10;
  double epsilon_nom = 1e-9;    // classification dead-band
  double tau_floor = 0.05;      // fallback threshold when no sample is admissible
  double degeneracy_floor_scale = 1e-12;
  std::optional<double> global_delta_threshold;  // integral rule; unset = off
  bool global_absolute = false;
};

MetricValue fault_metric(const AgentWindowRecord& record, double floor_scale = 1e-12);

/// Labels from the ratio x = dH_actual / dH_pred with dead-band epsilon:
/// degraded on sign mismatch or x < 1 - eps; improved on x > 1 + eps;
/// nominal otherwise. Degenerate denominators classify by the sign of
/// the actual change (the x -> +-inf limit of the same rule).
Classification classify(const AgentWindowRecord& record, double epsilon,
                        double floor_scale = 1e-12);

/// Contribution and visible set of the agent when re-pointed on the twin
/// model; bound by the caller to the twin snapshot at the diagnostic tick.
struct ThresholdSample {
  double contribution = 0.0;
  std::vector<int> visible;
};
using TwinPointingEval = std::function<ThresholdSample(const Eigen::Vector3d& pointing)>;

/// Sampled adaptive threshold: draws `threshold_samples` pointings
/// uniformly in the epsilon-cone around the nominal target direction,
/// keeps the samples whose contribution deviates from the prediction by a
/// nonzero amount not exceeding the realized deviation (lower bound only
/// when h_actual is NaN), and returns the minimum
/// |1 - (H' - H_prev)/(H_pred - H_prev)| over the admissible set.
/// Falls back to tau_floor when no sample is admissible or the
/// denominator is degenerate.
double adaptive_threshold(const AgentWindowRecord& record,
                          const Eigen::Vector3d& nominal_target_dir,
                          const TwinPointingEval& twin_eval, const FdiConfig& config,
                          RngStream& rng);

struct Detection {
  int agent_id = 0;
  double time = 0.0;
  double metric = 0.0;
  double threshold = 0.0;
  Classification classification = Classification::nominal;
  std::optional<double> latency;  // empty when the agent has no injected fault
};

/// The threshold detect() compares against: the sampled tau or the
/// bounded-perturbation ceiling epsilon_nom / |dH_pred|, whichever is
/// larger (a nominal agent's metric cannot exceed the latter).
double effective_threshold(const AgentWindowRecord& record, double sampled_tau,
                           const FdiConfig& config);

/// Emits one Detection per agent whose metric exceeds its threshold
/// (degenerate metrics always fire). `fault_start_by_agent` supplies the
/// earliest injected fault time per agent for latency attribution.
std::vector<Detection> detect(double t, std::span<const AgentWindowRecord> records,
                              std::span<const double> thresholds, const FdiConfig& config,
                              const std::map<int, double>& fault_start_by_agent);

struct GlobalDetection {
  bool detected = false;
  double time = 0.0;
};

/// Integral rule over a shared time grid: first t with
/// trapezoid-integral(h - h_nom) >= delta_threshold * (t - t0);
/// `absolute` compares |integral| instead of the signed value.
GlobalDetection global_detect(std::span<const double> times, std::span<const double> h,
                              std::span<const double> h_nom, double delta_threshold,
                              bool absolute = false);

/// Uniform direction in the spherical cap of half-angle epsilon about axis.
Eigen::Vector3d sample_cone(const Eigen::Vector3d& axis, double epsilon, RngStream& rng);

}  // namespace inspectfdi
