#pragma once

#include "inspectfdi/report.hpp"
#include "inspectfdi/scenario.hpp"

namespace inspectfdi {

/// Executes a scenario end to end: dynamics -> pointing -> fault
/// injection -> cost evaluation -> accumulation per tick, with a
/// fault-free twin predicted at every window anchor and metric /
/// threshold / detection refreshed at diagnostic ticks. Fully
/// deterministic in the config seed.
RunReport run(const ScenarioConfig& config);

}  // namespace inspectfdi
