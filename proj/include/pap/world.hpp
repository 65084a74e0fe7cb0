#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace pap {

// ---------------------------------------------------------------------------
// Object vocabulary

enum class HeightBand { low, mid, high };
enum class Temperature { room, hot, cold };

// Static, per-class properties. The dynamic per-instance state lives in
// ObjectAttrs.
struct ClassInfo {
  std::string name;
  bool is_receptacle = false;
  bool openable = false;
  bool toggleable = false;
  bool pickupable = false;
  bool sliceable = false;
  bool is_knife = false;     // can be used as the slicing tool
  bool is_fixture = false;   // placed like a receptacle, holds nothing (lamp, faucet)
  HeightBand band = HeightBand::mid;
  double base_size = 0.2;    // apparent size at zero distance, in screen units
};

const ClassInfo& class_info(const std::string& class_name);
bool known_class(const std::string& class_name);
std::vector<std::string> receptacle_classes();
std::vector<std::string> movable_classes();
std::vector<std::string> all_classes();

// ---------------------------------------------------------------------------
// Scene state

struct Cell {
  int x = 0;
  int y = 0;
  bool operator==(const Cell&) const = default;
  auto operator<=>(const Cell&) const = default;
};

struct ScenePose {
  Cell cell;
  int rotation = 0;  // degrees, one of 0/90/180/270; 0 faces -y
  int horizon = 0;   // degrees, one of -30/0/30; 30 looks down at the low band
  bool operator==(const ScenePose&) const = default;
};

struct ObjectAttrs {
  bool is_receptacle = false;
  bool openable = false;
  bool is_open = false;
  bool toggleable = false;
  bool is_on = false;
  bool pickupable = false;
  bool sliceable = false;
  bool is_sliced = false;
  Temperature temperature = Temperature::room;
  bool is_clean = false;
  bool operator==(const ObjectAttrs&) const = default;
};

// Where an object is. Exactly one of the three applies.
struct ObjectLocation {
  enum class Kind { on_floor, in_receptacle, held };
  Kind kind = Kind::on_floor;
  Cell cell;                   // on_floor: footprint cell
  HeightBand band = HeightBand::mid;
  std::string receptacle_id;   // in_receptacle
  bool operator==(const ObjectLocation&) const = default;
};

struct ObjectInstance {
  std::string id;
  std::string class_name;
  ObjectAttrs attrs;
  ObjectLocation location;
  bool operator==(const ObjectInstance&) const = default;
};

struct SceneState {
  int grid_w = 0;
  int grid_h = 0;
  std::vector<Cell> blocked;            // receptacle/fixture footprints
  std::map<std::string, ObjectInstance> objects;  // id -> instance, ordered
  ScenePose agent;
  std::optional<std::string> inventory;  // held object id, at most one
  uint64_t rng_seed = 0;
  std::string style_id;

  bool in_bounds(const Cell& c) const {
    return c.x >= 0 && c.x < grid_w && c.y >= 0 && c.y < grid_h;
  }
  bool is_blocked(const Cell& c) const;
  const ObjectInstance* find(const std::string& id) const;
  ObjectInstance* find(const std::string& id);
  // Ids of objects currently inside / on top of the given receptacle, sorted.
  std::vector<std::string> contents_of(const std::string& receptacle_id) const;
  // Validates the structural invariants; throws std::runtime_error on violation.
  void check_invariants() const;
};

// ---------------------------------------------------------------------------
// Atomic actions

enum class ActionKind {
  navigate,      // obj: destination id (resolved; class resolution is the caller's job)
  navigate_pos,  // cell
  rotate_to,     // rotation
  look_to,       // horizon
  open,          // obj
  close,         // obj
  pickup,        // obj
  put,           // obj + recep
  toggle_on,     // obj
  toggle_off,    // obj
  slice,         // obj
  stop,
};

struct AtomicAction {
  ActionKind kind = ActionKind::stop;
  std::string obj;    // target object id
  std::string recep;  // put destination id
  Cell cell;          // navigate_pos
  int rotation = 0;   // rotate_to
  int horizon = 0;    // look_to
};

std::string action_name(ActionKind kind);
std::optional<ActionKind> action_kind_from_name(const std::string& name);
size_t action_arity(ActionKind kind);
std::string describe(const AtomicAction& a);

enum class ActionErrorKind { not_visible, not_interactable, precondition_failed, unknown_id };

struct ActionError {
  ActionErrorKind kind = ActionErrorKind::precondition_failed;
  std::string message;
};

std::string error_name(ActionErrorKind k);

// Side effects worth reporting back to callers (heating, cleaning, ...).
struct WorldEvent {
  std::string what;    // "opened", "closed", "picked", "put", "heated", ...
  std::string obj_id;
};

struct StepResult {
  bool ok = false;
  ActionError error;
  std::vector<WorldEvent> events;
};

// ---------------------------------------------------------------------------
// Observation

struct BBox {
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  double area() const { return (x1 - x0) * (y1 - y0); }
  bool operator==(const BBox&) const = default;
};

double intersection_area(const BBox& a, const BBox& b);

struct Detection {
  std::string id;
  std::string class_name;
  BBox bbox;
};

struct Observation {
  std::vector<Detection> detections;
  ScenePose pose;
};

// Visibility range in cells and the interaction radius.
inline constexpr double kVisRange = 6.0;
inline constexpr double kInteractRange = 2.0;

// Ground-truth egocentric observation from the agent's current pose.
Observation observe(const SceneState& state);

// True when `id` is in the agent's current view (range, frustum, height band,
// not inside a closed receptacle, not held).
bool visible(const SceneState& state, const std::string& id);
// Euclidean distance in cells from the agent to the object's footprint cell.
double distance_to(const SceneState& state, const std::string& id);

// ---------------------------------------------------------------------------
// Transition

class PresearchMap;  // presearch.hpp

// Applies one atomic action. Failed actions leave `state` untouched.
// Navigate requires the map for destination poses; pass nullptr to make
// navigate fail with precondition_failed.
StepResult step(SceneState& state, const AtomicAction& action, const PresearchMap* map);

const char* band_name(HeightBand b);
HeightBand band_from_name(const std::string& s);
const char* temperature_name(Temperature t);
Temperature temperature_from_name(const std::string& s);

}  // namespace pap
