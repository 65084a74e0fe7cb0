#include "pap/interp/session.hpp"

#include "pap/common.hpp"

namespace pap::interp {

namespace {

double frac(uint64_t x) { return static_cast<double>(x >> 11) * 0x1.0p-53; }

}  // namespace

Observation apply_noise(const Observation& obs, const NoiseSpec& spec) {
  if (spec.epsilon <= 0 && spec.mu <= 0) return obs;
  Observation out;
  out.pose = obs.pose;
  const std::vector<std::string>& classes = all_classes();
  for (const Detection& det : obs.detections) {
    uint64_t h = mix_seed(spec.seed, fnv1a(det.id));
    if (frac(mix_seed(h, 1)) < spec.mu) continue;  // missed detection
    Detection d = det;
    if (frac(mix_seed(h, 2)) < spec.epsilon) {
      // Stable wrong label: skip the true class so a flip always changes it.
      size_t pick = mix_seed(h, 3) % (classes.size() - 1);
      size_t i = 0;
      for (const std::string& c : classes) {
        if (c == det.class_name) continue;
        if (i++ == pick) {
          d.class_name = c;
          break;
        }
      }
    }
    out.detections.push_back(d);
  }
  return out;
}

StepResult EnvSession::issue(const AtomicAction& a) {
  StepResult r = step(state, a, map.get());
  StepLogEntry e;
  e.action = a;
  e.ok = r.ok;
  if (!r.ok) {
    e.error_kind = r.error.kind;
    e.error_message = r.error.message;
  }
  e.events = r.events;
  step_log.push_back(std::move(e));
  if (r.ok && a.kind == ActionKind::pickup) touched.insert(a.obj);
  return r;
}

StepResult EnvSession::issue_failed(const AtomicAction& a, ActionError err) {
  StepLogEntry e;
  e.action = a;
  e.ok = false;
  e.error_kind = err.kind;
  e.error_message = err.message;
  step_log.push_back(std::move(e));
  return {false, std::move(err), {}};
}

Observation EnvSession::view() const { return apply_noise(observe(state), noise); }

}  // namespace pap::interp
