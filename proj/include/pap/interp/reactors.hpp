#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pap/interp/session.hpp"
#include "pap/interp/value.hpp"

namespace pap::interp {

// A reactor answers one kind of runtime query. Implementations must be
// deterministic functions of (args, session); any state they need is
// derived from the session's step log on every call.
class Reactor {
 public:
  virtual ~Reactor() = default;
  virtual Value query(const std::vector<Value>& args, const EnvSession& s) const = 0;
};

class ReactorRegistry {
 public:
  void add(const std::string& name, std::shared_ptr<Reactor> r) {
    reactors_[name] = std::move(r);
  }
  bool has(const std::string& name) const { return reactors_.count(name) > 0; }
  // Throws std::runtime_error for unknown reactors or bad arguments.
  Value query(const std::string& name, const std::vector<Value>& args,
              const EnvSession& s) const;

 private:
  std::map<std::string, std::shared_ptr<Reactor>> reactors_;
};

// Ground-truth reactors: perfect perception and perfect bookkeeping. Used
// for canonicalization and oracle-grounding experiments.
ReactorRegistry oracle_registry();

// The hand-built runtime modules: masks and relations come from the current
// (noisy) view, object locations from the pre-search scan replayed against
// the step log, attributes from class knowledge plus a step-log memo with a
// closed/off default.
ReactorRegistry heuristic_registry();

// --- shared grounding helpers ----------------------------------------------

// Resolves a value naming an object (ref, id, or class) against the whole
// scene. Class names pick the untouched instance nearest to the agent,
// breaking ties by id.
std::optional<std::string> resolve_instance(const EnvSession& s, const Value& v);

// Resolves a class name (or id) against the current view only. Prefers
// untouched instances, then the largest bbox, then the smallest id.
std::optional<ObjRef> mask_instance(const EnvSession& s, const Observation& obs,
                                    const std::string& cls_or_id);

// The relation checker's answer vocabulary. In programs these surface as the
// enum symbols OBJ_IN_RECEP and NOT_IN.
enum class RelAnswer { obj_in_recep, not_in };
constexpr const char* kRelInRecep = "#OBJ_IN_RECEP";
constexpr const char* kRelNotIn = "#NOT_IN";

// The visual containment rule: over 70% of the object's box overlaps the
// receptacle's box. Degenerate object boxes read as not contained.
bool rel_from_boxes(const BBox& obj, const BBox& recep);

// Typed entry point for the same rule; throws std::invalid_argument on
// zero-area boxes instead of guessing.
RelAnswer rel_checker_heuristic(const BBox& obj, const BBox& recep);

// Where each movable is believed to be: the pre-search scan updated by the
// successful pickups and puts in the step log. Ids map to receptacle ids;
// held objects map to "".
std::map<std::string, std::string> believed_locations(const EnvSession& s);

}  // namespace pap::interp
