#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "pap/presearch.hpp"
#include "pap/world.hpp"

namespace pap::interp {

// Perception noise. Flips are stable per (seed, object id): the same object
// keeps the same wrong label for the whole episode, while the flip rate over
// many objects converges to epsilon.
struct NoiseSpec {
  double epsilon = 0;  // class flip probability
  double mu = 0;       // detection miss probability
  uint64_t seed = 0;
};

Observation apply_noise(const Observation& obs, const NoiseSpec& spec);

struct StepLogEntry {
  AtomicAction action;
  bool ok = false;
  ActionErrorKind error_kind = ActionErrorKind::precondition_failed;
  std::string error_message;
  std::vector<WorldEvent> events;
};

// One episode against one scene: the live world plus everything the agent
// has done so far. Reactors read the step log instead of subscribing to
// events, so the session has no observer machinery.
class EnvSession {
 public:
  EnvSession(SceneState start, std::shared_ptr<const PresearchMap> presearch,
             NoiseSpec noise_spec = {})
      : state(std::move(start)), map(std::move(presearch)), noise(noise_spec) {}

  SceneState state;
  std::shared_ptr<const PresearchMap> map;
  NoiseSpec noise;
  std::vector<StepLogEntry> step_log;
  std::set<std::string> touched;  // ids successfully picked up this episode

  // Applies the action to the world and logs the outcome.
  StepResult issue(const AtomicAction& a);
  // Logs an action that could not even be grounded (no world change).
  StepResult issue_failed(const AtomicAction& a, ActionError err);

  // What the agent sees: ground truth pushed through the noise channel.
  Observation view() const;
  // Ground truth, for oracle reactors only.
  Observation true_view() const { return observe(state); }
};

}  // namespace pap::interp
