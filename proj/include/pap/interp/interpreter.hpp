#pragma once

#include <memory>
#include <string>
#include <vector>

#include "pap/dsl/ast.hpp"
#include "pap/interp/reactors.hpp"
#include "pap/interp/session.hpp"
#include "pap/interp/value.hpp"

namespace pap::interp {

// One planned call: a procedural action from the library or a bare atomic.
struct CallEntry {
  std::string name;
  std::vector<Value> args;
  bool atomic = false;
};

// An executable procedural action: the planner's output, an ordered list of
// calls with concrete arguments.
using ExecutableProcedure = std::vector<CallEntry>;

Json ae_to_json(const ExecutableProcedure& ae);
ExecutableProcedure ae_from_json(const Json& j);

// Shape key for generalization splits: call names plus argument classes,
// e.g. "udp_clean_object(mug);udp_put_object(mug,cabinet)".
std::string signature_of(const ExecutableProcedure& ae);

// A full grid scan on an 8x8 scene costs up to ~60 cells * 17 scan actions,
// so the atomic budget leaves room for one scan plus the follow-up visits.
struct InterpLimits {
  int max_atomics = 2048;
  int max_events = 2048 * 32 + 4096;  // hard progress cap; guarantees termination
  int max_depth = 64;
};

enum class Outcome { success, failed_action, budget_exceeded, runtime_fault };
const char* outcome_name(Outcome o);

struct TraceEvent {
  enum class Kind {
    proc_enter, proc_exit, atomic_issued, reactor_queried, branch, loop_iter, fault
  };
  Kind kind = Kind::fault;
  std::string name;  // procedure / action / reactor name
  int stmt_id = 0;
  Json detail;       // args, results, ok flags, error text
};

struct ExecutionTrace {
  Outcome outcome = Outcome::success;
  std::string fault;  // message when outcome == runtime_fault
  std::vector<TraceEvent> events;
  std::vector<AtomicAction> atomics;  // every issued atomic, in order
  std::vector<bool> atomic_ok;
  Value result;  // return value of the last top-level call
};

// Runs an executable procedure against the session. Late binding throughout:
// every reactor query and class-name grounding happens at reach time. The
// first failed atomic aborts with Outcome::failed_action; reactor or
// evaluation errors abort with Outcome::runtime_fault. Always terminates
// within the limits.
ExecutionTrace interpret(const dsl::Program& lib, const ExecutableProcedure& ae,
                         EnvSession& session, const ReactorRegistry& reg,
                         const InterpLimits& lim = {});

// trace/1: a header row followed by one row per event.
std::vector<Json> trace_to_jsonl(const ExecutionTrace& t);

// The atomic rollout of an executable procedure under oracle reactors on an
// untouched copy of the scene: the program's canonical form.
struct CanonicalForm {
  std::vector<AtomicAction> atomics;
  std::vector<bool> ok;
  Outcome outcome = Outcome::success;
  Value result;
  std::string final_state;  // scene_dump of the end state
};

CanonicalForm canonicalize(const dsl::Program& lib, const ExecutableProcedure& ae,
                           const SceneState& start,
                           std::shared_ptr<const PresearchMap> map,
                           const InterpLimits& lim = {});

}  // namespace pap::interp
