#include "wbc/scenario.hpp"

namespace wbc {

double ScenarioScript::total_duration() const {
  double t = 0.0;
  for (const auto& p : phases) t += p.duration;
  return t;
}

ScenarioResult run_scenario(const RobotModel& model, const ScenarioScript& script) {
  ScenarioRunner runner(model, script);
  return runner.run();
}

}  // namespace wbc
