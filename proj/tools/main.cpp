#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "inspectfdi/runner.hpp"
#include "inspectfdi/scenario.hpp"

namespace {

using namespace inspectfdi;

// §III.F-style planar fixture: two agents on the x axis, two POIs on
// opposite square vertices, improper prior, equal weights.
constexpr const char* kAnalyticFixture = R"json({
  "schema_version": 1,
  "mode": "analytic1dof",
  "seed": 1,
  "duration": 1,
  "dt": 1,
  "analytic": {
    "pois": [
      {"s": [1.0, 1.0], "importance": 0.5, "inverse_prior": 0.0},
      {"s": [-1.0, -1.0], "importance": 0.5, "inverse_prior": 0.0}
    ]
  },
  "agents": [
    {"id": 1, "init": {"x": -1.5}, "step": 0.1},
    {"id": 2, "init": {"x": 1.5}, "step": -0.1}
  ]
})json";

int run_command(const std::string& path, const std::vector<std::string>& overrides,
                std::optional<std::uint64_t> seed, std::optional<std::string> out_dir,
                bool parallel) {
  ScenarioConfig cfg = load_config(path, overrides);
  if (seed) {
    cfg.seed = *seed;
  }
  if (out_dir) {
    cfg.output_dir = *out_dir;
  }
  if (parallel) {
    cfg.parallel = true;
  }
  const RunReport report = run(cfg);
  write_report(report, cfg.output_dir);

  std::printf("scenario: %s (mode=%s, seed=%llu)\n", path.c_str(), to_string(cfg.mode),
              static_cast<unsigned long long>(cfg.seed));
  std::printf("rows: %zu, detections: %zu\n", report.rows.size(), report.detections.size());
  for (const Detection& d : report.detections) {
    std::printf("  agent %d detected at t=%g (metric=%g, threshold=%g, %s)\n", d.agent_id,
                d.time, d.metric, d.threshold, to_string(d.classification));
  }
  for (const FaultSummary& s : report.summary) {
    std::printf("  fault %s: expected %s, observed %s, detected=%s", s.fault_id.c_str(),
                s.expected_signature.c_str(), s.observed_behavior.c_str(),
                s.detected ? "yes" : "no");
    if (s.latency) {
      std::printf(", latency=%gs", *s.latency);
    }
    std::printf("\n");
  }
  if (report.global) {
    if (report.global->detected) {
      std::printf("global integral rule: fault at t=%g\n", report.global->time);
    } else {
      std::printf("global integral rule: no fault\n");
    }
  }
  std::printf("report written to %s\n", cfg.output_dir.string().c_str());
  return 0;
}

int validate_command(const std::string& path, const std::vector<std::string>& overrides) {
  const ScenarioConfig cfg = load_config(path, overrides);
  const std::size_t pois = cfg.mode == ScenarioMode::sphere3d
                               ? (cfg.target.poi_count > 0 ? cfg.target.poi_count
                                                           : cfg.target.explicit_pois.size())
                               : cfg.analytic_pois.size();
  std::printf("OK: %s (mode=%s, agents=%zu, pois=%zu, faults=%zu)\n", path.c_str(),
              to_string(cfg.mode), cfg.agents.size(), pois, cfg.faults.size());
  return 0;
}

void print_analytic_case(const char* label, const RunReport& report) {
  // Single-step fixture: row 1 carries the post-step metric/ratio.
  const RunRow& row = report.rows.at(1);
  for (std::size_t col = 0; col < report.agent_ids.size(); ++col) {
    const char* classification = "nominal";
    for (const Detection& d : report.detections) {
      if (d.agent_id == report.agent_ids[col]) {
        classification = to_string(d.classification);
      }
    }
    std::printf("%-26s %-6d %-8.4g %-8.4g %s\n", label, report.agent_ids[col], row.ratio[col],
                row.metric[col], classification);
  }
}

int analytic_command() {
  ScenarioConfig actuator = parse_config(kAnalyticFixture, "<builtin>");
  FaultSpec bias;
  bias.id = "actuator_bias";
  bias.agent_id = 1;
  bias.kind = FaultKind::actuator_state;
  bias.start_time = 0.0;
  bias.step_bias = 0.05;
  actuator.faults.push_back(bias);

  ScenarioConfig sensor = parse_config(kAnalyticFixture, "<builtin>");
  FaultSpec degradation;
  degradation.id = "sensor_degradation";
  degradation.agent_id = 2;
  degradation.kind = FaultKind::sensor_degradation;
  degradation.start_time = 0.0;
  degradation.beta = 0.7;
  sensor.faults.push_back(degradation);

  std::printf("analytic two-agent fixture: a=1, k=1, w^-1=0, phi=1/2, x=(-1.5,+1.5), dx=0.1\n\n");
  std::printf("%-26s %-6s %-8s %-8s %s\n", "case", "agent", "r_i", "H_m", "classification");
  print_analytic_case("actuator bias +0.05", run(actuator));
  print_analytic_case("sensor degradation 0.7", run(sensor));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-spacecraft inspection simulator with information-cost fault detection"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  bool parallel = false;

  CLI::App* run_cmd = app.add_subcommand("run", "Run a scenario and write CSV reports");
  run_cmd->add_option("config", config_path, "Scenario JSON file")->required();
  run_cmd->add_option("--override", overrides, "key.path=value applied before validation");
  run_cmd->add_option("--seed", seed, "Replace the scenario seed");
  run_cmd->add_option("--out-dir", out_dir, "Report directory");
  run_cmd->add_flag("--parallel", parallel, "Fan per-agent evaluation out to threads");

  CLI::App* validate_cmd = app.add_subcommand("validate", "Check a scenario file");
  validate_cmd->add_option("config", config_path, "Scenario JSON file")->required();
  validate_cmd->add_option("--override", overrides, "key.path=value applied before validation");

  CLI::App* analytic_cmd =
      app.add_subcommand("analytic", "Print the built-in planar fixture fault table");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      return run_command(config_path, overrides, seed, out_dir, parallel);
    }
    if (validate_cmd->parsed()) {
      return validate_command(config_path, overrides);
    }
    if (analytic_cmd->parsed()) {
      return analytic_command();
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
