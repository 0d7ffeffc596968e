#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "inspectfdi/errors.hpp"
#include "inspectfdi/report.hpp"
#include "inspectfdi/runner.hpp"
#include "inspectfdi/scenario.hpp"

using namespace inspectfdi;

namespace {

const std::string kConfigDir = INSPECTFDI_CONFIG_DIR;

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path fresh_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "inspectfdi_tests" / name;
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("doubles are formatted round-trip safe") {
  for (double v : {0.5, 1.0 / 3.0, -0.0, 1e-17, 123456.789, 2.2250738585072014e-308}) {
    const std::string s = format_double(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }
}

TEST_CASE("report files carry the fixed headers") {
  const ScenarioConfig cfg = load_config(kConfigDir + "/analytic1dof.json");
  const RunReport report = run(cfg);
  const auto dir = fresh_dir("headers");
  write_report(report, dir);

  const std::string timeseries = slurp(dir / "timeseries.csv");
  CHECK(timeseries.rfind("t,H,H_pred,H_1,H_1_pred,Hm_1,tau_1,H_2,H_2_pred,Hm_2,tau_2\n", 0) ==
        0);

  // Fault-free run: the detections table is just the header.
  CHECK(slurp(dir / "detections.csv") ==
        "agent_id,t_detect,metric,threshold,classification,latency\n");
  CHECK(slurp(dir / "summary.csv") ==
        "fault_id,expected_signature,observed_behavior,detected,latency\n");
}

TEST_CASE("identical runs produce byte-identical files") {
  const ScenarioConfig cfg = load_config(kConfigDir + "/analytic1dof_sensor.json");
  const auto dir_a = fresh_dir("bytes_a");
  const auto dir_b = fresh_dir("bytes_b");
  write_report(run(cfg), dir_a);
  write_report(run(cfg), dir_b);
  for (const char* name : {"timeseries.csv", "detections.csv", "summary.csv"}) {
    CHECK(slurp(dir_a / name) == slurp(dir_b / name));
  }
}

TEST_CASE("summary rows follow the config fault order") {
  const ScenarioConfig cfg = load_config(kConfigDir + "/analytic1dof_actuator.json");
  const RunReport report = run(cfg);
  const auto dir = fresh_dir("summary");
  write_report(report, dir);
  const std::string summary = slurp(dir / "summary.csv");
  CHECK(summary.find("over_actuation,Hm_1>0,improved,yes,") != std::string::npos);
}

TEST_CASE("unwritable directories raise ReportError with the path") {
  const auto dir = fresh_dir("blocked");
  std::filesystem::create_directories(dir.parent_path());
  std::ofstream(dir).put('x');  // occupy the path with a file
  const RunReport empty;
  CHECK_THROWS_AS(write_report(empty, dir / "sub"), ReportError);
}
