#include "pap/world.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "pap/presearch.hpp"

namespace pap {

namespace {

std::vector<ClassInfo> make_class_table() {
  auto recep = [](std::string name, bool openable, HeightBand band, double size,
                  bool toggleable = false) {
    ClassInfo c;
    c.name = std::move(name);
    c.is_receptacle = true;
    c.openable = openable;
    c.toggleable = toggleable;
    c.band = band;
    c.base_size = size;
    return c;
  };
  auto fixture = [](std::string name, HeightBand band, double size) {
    ClassInfo c;
    c.name = std::move(name);
    c.is_fixture = true;
    c.toggleable = true;
    c.band = band;
    c.base_size = size;
    return c;
  };
  auto movable = [](std::string name, double size, bool sliceable = false,
                    bool openable = false, bool knife = false) {
    ClassInfo c;
    c.name = std::move(name);
    c.pickupable = true;
    c.sliceable = sliceable;
    c.openable = openable;
    c.is_knife = knife;
    c.band = HeightBand::mid;
    c.base_size = size;
    return c;
  };

  std::vector<ClassInfo> table;
  table.push_back(recep("fridge", true, HeightBand::mid, 0.85));
  table.push_back(recep("microwave", true, HeightBand::mid, 0.50, /*toggleable=*/true));
  table.push_back(recep("cabinet", true, HeightBand::high, 0.60));
  table.push_back(recep("drawer", true, HeightBand::low, 0.45));
  table.push_back(recep("safe", true, HeightBand::low, 0.50));
  table.push_back(recep("countertop", false, HeightBand::mid, 0.90));
  table.push_back(recep("table", false, HeightBand::mid, 0.90));
  table.push_back(recep("sink", false, HeightBand::mid, 0.55));
  table.push_back(fixture("faucet", HeightBand::mid, 0.18));
  table.push_back(fixture("lamp", HeightBand::mid, 0.40));
  table.push_back(movable("mug", 0.14));
  table.push_back(movable("egg", 0.10));
  table.push_back(movable("apple", 0.12, /*sliceable=*/true));
  table.push_back(movable("potato", 0.12, /*sliceable=*/true));
  table.push_back(movable("tomato", 0.12, /*sliceable=*/true));
  table.push_back(movable("bread", 0.18, /*sliceable=*/true));
  table.push_back(movable("cd", 0.12));
  table.push_back(movable("book", 0.16));
  table.push_back(movable("laptop", 0.30, /*sliceable=*/false, /*openable=*/true));
  table.push_back(movable("plate", 0.18));
  table.push_back(movable("fork", 0.08));
  table.push_back(movable("knife", 0.12, false, false, /*knife=*/true));
  return table;
}

const std::vector<ClassInfo>& class_table() {
  static const std::vector<ClassInfo> table = make_class_table();
  return table;
}

}  // namespace

const ClassInfo& class_info(const std::string& class_name) {
  for (const ClassInfo& c : class_table())
    if (c.name == class_name) return c;
  throw std::invalid_argument("unknown object class: " + class_name);
}

bool known_class(const std::string& class_name) {
  for (const ClassInfo& c : class_table())
    if (c.name == class_name) return true;
  return false;
}

std::vector<std::string> receptacle_classes() {
  std::vector<std::string> out;
  for (const ClassInfo& c : class_table())
    if (c.is_receptacle) out.push_back(c.name);
  return out;
}

std::vector<std::string> movable_classes() {
  std::vector<std::string> out;
  for (const ClassInfo& c : class_table())
    if (c.pickupable) out.push_back(c.name);
  return out;
}

std::vector<std::string> all_classes() {
  std::vector<std::string> out;
  for (const ClassInfo& c : class_table()) out.push_back(c.name);
  return out;
}

// ---------------------------------------------------------------------------

bool SceneState::is_blocked(const Cell& c) const {
  return std::find(blocked.begin(), blocked.end(), c) != blocked.end();
}

const ObjectInstance* SceneState::find(const std::string& id) const {
  auto it = objects.find(id);
  return it == objects.end() ? nullptr : &it->second;
}

ObjectInstance* SceneState::find(const std::string& id) {
  auto it = objects.find(id);
  return it == objects.end() ? nullptr : &it->second;
}

std::vector<std::string> SceneState::contents_of(const std::string& receptacle_id) const {
  std::vector<std::string> out;
  for (const auto& [id, obj] : objects)
    if (obj.location.kind == ObjectLocation::Kind::in_receptacle &&
        obj.location.receptacle_id == receptacle_id)
      out.push_back(id);
  return out;
}

void SceneState::check_invariants() const {
  auto fail = [](const std::string& msg) { throw std::runtime_error("scene invariant: " + msg); };
  int held_count = 0;
  for (const auto& [id, obj] : objects) {
    if (id != obj.id) fail("map key mismatch for " + id);
    const ClassInfo& info = class_info(obj.class_name);
    if (obj.attrs.is_open && !obj.attrs.openable) fail(id + ": is_open without openable");
    if (obj.attrs.is_on && !obj.attrs.toggleable) fail(id + ": is_on without toggleable");
    if (obj.attrs.is_sliced && !obj.attrs.sliceable) fail(id + ": is_sliced without sliceable");
    if (obj.attrs.pickupable && obj.attrs.is_receptacle)
      fail(id + ": pickupable receptacle");
    switch (obj.location.kind) {
      case ObjectLocation::Kind::on_floor:
        if (!in_bounds(obj.location.cell)) fail(id + ": cell out of bounds");
        if (!is_blocked(obj.location.cell)) fail(id + ": footprint cell not blocked");
        break;
      case ObjectLocation::Kind::in_receptacle: {
        const ObjectInstance* recep = find(obj.location.receptacle_id);
        if (!recep) fail(id + ": container does not exist");
        if (!recep->attrs.is_receptacle) fail(id + ": container is not a receptacle");
        if (recep->location.kind != ObjectLocation::Kind::on_floor)
          fail(id + ": nested containment");
        break;
      }
      case ObjectLocation::Kind::held:
        ++held_count;
        if (!inventory || *inventory != id) fail(id + ": held but not in inventory");
        if (!info.pickupable) fail(id + ": held non-pickupable");
        break;
    }
  }
  if (held_count > 1) fail("more than one object held");
  if (inventory) {
    const ObjectInstance* held = find(*inventory);
    if (!held || held->location.kind != ObjectLocation::Kind::held)
      fail("inventory id not held");
  }
  if (!in_bounds(agent.cell) || is_blocked(agent.cell)) fail("agent cell invalid");
  if (agent.rotation % 90 != 0 || agent.rotation < 0 || agent.rotation >= 360)
    fail("agent rotation invalid");
  if (agent.horizon != -30 && agent.horizon != 0 && agent.horizon != 30)
    fail("agent horizon invalid");
}

// ---------------------------------------------------------------------------

std::string action_name(ActionKind kind) {
  switch (kind) {
    case ActionKind::navigate: return "navigate";
    case ActionKind::navigate_pos: return "navigate_pos";
    case ActionKind::rotate_to: return "rotate_to";
    case ActionKind::look_to: return "look_to";
    case ActionKind::open: return "open";
    case ActionKind::close: return "close";
    case ActionKind::pickup: return "pickup";
    case ActionKind::put: return "put";
    case ActionKind::toggle_on: return "toggle_on";
    case ActionKind::toggle_off: return "toggle_off";
    case ActionKind::slice: return "slice";
    case ActionKind::stop: return "stop";
  }
  return "?";
}

std::optional<ActionKind> action_kind_from_name(const std::string& name) {
  static const ActionKind kinds[] = {
      ActionKind::navigate, ActionKind::navigate_pos, ActionKind::rotate_to,
      ActionKind::look_to,  ActionKind::open,         ActionKind::close,
      ActionKind::pickup,   ActionKind::put,          ActionKind::toggle_on,
      ActionKind::toggle_off, ActionKind::slice,      ActionKind::stop};
  for (ActionKind k : kinds)
    if (action_name(k) == name) return k;
  return std::nullopt;
}

size_t action_arity(ActionKind kind) {
  switch (kind) {
    case ActionKind::stop: return 0;
    case ActionKind::put: return 2;
    case ActionKind::navigate_pos: return 2;  // x, y
    default: return 1;
  }
}

std::string describe(const AtomicAction& a) {
  std::string s = action_name(a.kind);
  switch (a.kind) {
    case ActionKind::navigate_pos:
      s += "(" + std::to_string(a.cell.x) + "," + std::to_string(a.cell.y) + ")";
      break;
    case ActionKind::rotate_to: s += "(" + std::to_string(a.rotation) + ")"; break;
    case ActionKind::look_to: s += "(" + std::to_string(a.horizon) + ")"; break;
    case ActionKind::put: s += "(" + a.obj + "," + a.recep + ")"; break;
    case ActionKind::stop: break;
    default: s += "(" + a.obj + ")"; break;
  }
  return s;
}

std::string error_name(ActionErrorKind k) {
  switch (k) {
    case ActionErrorKind::not_visible: return "not_visible";
    case ActionErrorKind::not_interactable: return "not_interactable";
    case ActionErrorKind::precondition_failed: return "precondition_failed";
    case ActionErrorKind::unknown_id: return "unknown_id";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Visibility geometry

namespace {

struct Facing {
  double x, y;
};

Facing facing_vector(int rotation) {
  switch (rotation) {
    case 0: return {0, -1};
    case 90: return {1, 0};
    case 180: return {0, 1};
    case 270: return {-1, 0};
  }
  throw std::invalid_argument("bad rotation");
}

HeightBand band_for_horizon(int horizon) {
  if (horizon == 30) return HeightBand::low;
  if (horizon == -30) return HeightBand::high;
  return HeightBand::mid;
}

// Footprint cell and effective height band of a non-held object. Contained
// objects share the geometry of their container.
struct Anchor {
  Cell cell;
  HeightBand band;
  const ObjectInstance* container = nullptr;  // set for contained objects
};

std::optional<Anchor> anchor_of(const SceneState& state, const ObjectInstance& obj) {
  switch (obj.location.kind) {
    case ObjectLocation::Kind::on_floor:
      return Anchor{obj.location.cell, obj.location.band, nullptr};
    case ObjectLocation::Kind::in_receptacle: {
      const ObjectInstance* recep = state.find(obj.location.receptacle_id);
      if (!recep || recep->location.kind != ObjectLocation::Kind::on_floor)
        return std::nullopt;
      return Anchor{recep->location.cell, recep->location.band, recep};
    }
    case ObjectLocation::Kind::held: return std::nullopt;
  }
  return std::nullopt;
}

// Bearing of the anchor cell relative to the agent's facing, in degrees.
struct Sight {
  double dist;
  double angle;
};

std::optional<Sight> sight_line(const ScenePose& agent, const Cell& target,
                                HeightBand band) {
  if (band != band_for_horizon(agent.horizon)) return std::nullopt;
  double dx = target.x - agent.cell.x;
  double dy = target.y - agent.cell.y;
  double dist = std::hypot(dx, dy);
  if (dist <= 0.0 || dist > kVisRange) return std::nullopt;
  Facing f = facing_vector(agent.rotation);
  double dot = f.x * dx + f.y * dy;
  double cross = f.x * dy - f.y * dx;
  double angle = std::atan2(cross, dot) * 180.0 / std::numbers::pi;
  if (std::abs(angle) > 45.0 + 1e-9) return std::nullopt;
  return Sight{dist, angle};
}

BBox clamp_unit(BBox b) {
  b.x0 = std::clamp(b.x0, 0.0, 1.0);
  b.y0 = std::clamp(b.y0, 0.0, 1.0);
  b.x1 = std::clamp(b.x1, 0.0, 1.0);
  b.y1 = std::clamp(b.y1, 0.0, 1.0);
  return b;
}

// Projection of a top-level object: a box centered on its bearing, shrinking
// linearly with distance. Only relative areas and overlaps matter downstream.
BBox project_toplevel(const Sight& s, double base_size) {
  double shrink = (kVisRange + 1.0 - s.dist) / (kVisRange + 1.0);
  double w = base_size * shrink;
  double h = 0.75 * w;
  double u = 0.5 + s.angle / 90.0;
  double v = 0.5;
  return clamp_unit({u - w / 2, v - h / 2, u + w / 2, v + h / 2});
}

// Contained objects project to a sub-box fully inside the container's box.
// slot spreads multiple contents across the container.
BBox project_contained(const BBox& container, double obj_base, double recep_base,
                       size_t slot) {
  static const double kSlotX[] = {0.5, 0.3, 0.7, 0.4, 0.6};
  double ratio = std::clamp(obj_base / recep_base, 0.08, 0.45);
  double w = (container.x1 - container.x0) * ratio;
  double h = (container.y1 - container.y0) * ratio;
  double cx = container.x0 + kSlotX[slot % 5] * (container.x1 - container.x0);
  double cy = container.y0 + 0.6 * (container.y1 - container.y0);
  BBox b{cx - w / 2, cy - h / 2, cx + w / 2, cy + h / 2};
  b.x0 = std::max(b.x0, container.x0);
  b.y0 = std::max(b.y0, container.y0);
  b.x1 = std::min(b.x1, container.x1);
  b.y1 = std::min(b.y1, container.y1);
  return b;
}

bool contents_exposed(const ObjectInstance& recep) {
  return !recep.attrs.openable || recep.attrs.is_open;
}

}  // namespace

double intersection_area(const BBox& a, const BBox& b) {
  double w = std::min(a.x1, b.x1) - std::max(a.x0, b.x0);
  double h = std::min(a.y1, b.y1) - std::max(a.y0, b.y0);
  if (w <= 0 || h <= 0) return 0;
  return w * h;
}

bool visible(const SceneState& state, const std::string& id) {
  const ObjectInstance* obj = state.find(id);
  if (!obj) return false;
  auto anchor = anchor_of(state, *obj);
  if (!anchor) return false;
  if (anchor->container && !contents_exposed(*anchor->container)) return false;
  return sight_line(state.agent, anchor->cell, anchor->band).has_value();
}

double distance_to(const SceneState& state, const std::string& id) {
  const ObjectInstance* obj = state.find(id);
  if (!obj) return std::numeric_limits<double>::infinity();
  auto anchor = anchor_of(state, *obj);
  if (!anchor) return 0.0;  // held
  return std::hypot(anchor->cell.x - state.agent.cell.x,
                    anchor->cell.y - state.agent.cell.y);
}

Observation observe(const SceneState& state) {
  Observation obs;
  obs.pose = state.agent;
  for (const auto& [id, obj] : state.objects) {
    auto anchor = anchor_of(state, obj);
    if (!anchor) continue;
    auto sight = sight_line(state.agent, anchor->cell, anchor->band);
    if (!sight) continue;
    if (!anchor->container) {
      obs.detections.push_back({id, obj.class_name,
                                project_toplevel(*sight, class_info(obj.class_name).base_size)});
    } else {
      if (!contents_exposed(*anchor->container)) continue;
      BBox cbox = project_toplevel(*sight, class_info(anchor->container->class_name).base_size);
      std::vector<std::string> siblings = state.contents_of(anchor->container->id);
      size_t slot = std::find(siblings.begin(), siblings.end(), id) - siblings.begin();
      obs.detections.push_back(
          {id, obj.class_name,
           project_contained(cbox, class_info(obj.class_name).base_size,
                             class_info(anchor->container->class_name).base_size, slot)});
    }
  }
  return obs;
}

// ---------------------------------------------------------------------------
// Transition

namespace {

struct Target {
  const ObjectInstance* obj;
  ActionError err;
};

// Looks up an interaction target and checks visibility plus range.
std::optional<ActionError> check_interactable(const SceneState& state,
                                              const std::string& id,
                                              const ObjectInstance** out) {
  const ObjectInstance* obj = state.find(id);
  if (!obj)
    return ActionError{ActionErrorKind::unknown_id, "no such object: " + id};
  if (!visible(state, id))
    return ActionError{ActionErrorKind::not_visible, id + " is not visible"};
  if (distance_to(state, id) > kInteractRange + 1e-9)
    return ActionError{ActionErrorKind::not_interactable, id + " is out of reach"};
  *out = obj;
  return std::nullopt;
}

// The faucet paired with a sink (or vice versa): the nearest instance of the
// other class within 1.5 cells.
const ObjectInstance* companion(const SceneState& state, const ObjectInstance& of,
                                const std::string& companion_class) {
  const ObjectInstance* best = nullptr;
  double best_d = 1.5 + 1e-9;
  for (const auto& [id, obj] : state.objects) {
    if (obj.class_name != companion_class) continue;
    if (obj.location.kind != ObjectLocation::Kind::on_floor) continue;
    double d = std::hypot(obj.location.cell.x - of.location.cell.x,
                          obj.location.cell.y - of.location.cell.y);
    if (d < best_d) {
      best_d = d;
      best = &obj;
    }
  }
  return best;
}

StepResult fail(ActionError e) { return {false, std::move(e), {}}; }

StepResult ok_result(std::vector<WorldEvent> events = {}) {
  return {true, {}, std::move(events)};
}

}  // namespace

StepResult step(SceneState& state, const AtomicAction& action, const PresearchMap* map) {
  switch (action.kind) {
    case ActionKind::stop:
      return ok_result();

    case ActionKind::navigate: {
      const ObjectInstance* obj = state.find(action.obj);
      if (!obj)
        return fail({ActionErrorKind::unknown_id, "no such object: " + action.obj});
      if (obj->location.kind == ObjectLocation::Kind::held)
        return ok_result({{"navigated", action.obj}});  // already in hand
      if (!map)
        return fail({ActionErrorKind::precondition_failed, "no presearch map"});
      // Destination pose: the object's own pose for receptacles and fixtures,
      // the current container's pose for movables.
      std::string anchor_id = action.obj;
      if (obj->location.kind == ObjectLocation::Kind::in_receptacle)
        anchor_id = obj->location.receptacle_id;
      auto pose = map->pose_of(anchor_id);
      if (!pose)
        return fail({ActionErrorKind::precondition_failed,
                     action.obj + " has no pre-searched pose"});
      state.agent = *pose;
      return ok_result({{"navigated", action.obj}});
    }

    case ActionKind::navigate_pos: {
      if (!state.in_bounds(action.cell) || state.is_blocked(action.cell))
        return fail({ActionErrorKind::precondition_failed, "cell not reachable"});
      state.agent.cell = action.cell;
      return ok_result();
    }

    case ActionKind::rotate_to: {
      if (action.rotation != 0 && action.rotation != 90 && action.rotation != 180 &&
          action.rotation != 270)
        return fail({ActionErrorKind::precondition_failed, "bad rotation"});
      state.agent.rotation = action.rotation;
      return ok_result();
    }

    case ActionKind::look_to: {
      if (action.horizon != -30 && action.horizon != 0 && action.horizon != 30)
        return fail({ActionErrorKind::precondition_failed, "bad horizon"});
      state.agent.horizon = action.horizon;
      return ok_result();
    }

    case ActionKind::open: {
      const ObjectInstance* obj = nullptr;
      if (auto err = check_interactable(state, action.obj, &obj)) return fail(*err);
      if (!obj->attrs.openable)
        return fail({ActionErrorKind::not_interactable, action.obj + " is not openable"});
      if (obj->attrs.is_open)
        return fail({ActionErrorKind::precondition_failed, action.obj + " is already open"});
      state.find(action.obj)->attrs.is_open = true;
      return ok_result({{"opened", action.obj}});
    }

    case ActionKind::close: {
      const ObjectInstance* obj = nullptr;
      if (auto err = check_interactable(state, action.obj, &obj)) return fail(*err);
      if (!obj->attrs.openable)
        return fail({ActionErrorKind::not_interactable, action.obj + " is not openable"});
      if (!obj->attrs.is_open)
        return fail({ActionErrorKind::precondition_failed, action.obj + " is already closed"});
      state.find(action.obj)->attrs.is_open = false;
      return ok_result({{"closed", action.obj}});
    }

    case ActionKind::pickup: {
      if (state.inventory && *state.inventory == action.obj)
        return fail({ActionErrorKind::precondition_failed, "already holding " + action.obj});
      const ObjectInstance* obj = nullptr;
      if (auto err = check_interactable(state, action.obj, &obj)) return fail(*err);
      if (!obj->attrs.pickupable)
        return fail({ActionErrorKind::not_interactable, action.obj + " is not pickupable"});
      if (state.inventory)
        return fail({ActionErrorKind::precondition_failed,
                     "already holding " + *state.inventory});
      if (obj->attrs.openable && obj->attrs.is_open)
        return fail({ActionErrorKind::precondition_failed,
                     action.obj + " must be closed before pickup"});
      ObjectInstance* mut = state.find(action.obj);
      mut->location = ObjectLocation{ObjectLocation::Kind::held, {}, HeightBand::mid, ""};
      state.inventory = action.obj;
      return ok_result({{"picked", action.obj}});
    }

    case ActionKind::put: {
      if (!state.find(action.obj))
        return fail({ActionErrorKind::unknown_id, "no such object: " + action.obj});
      if (!state.inventory || *state.inventory != action.obj)
        return fail({ActionErrorKind::precondition_failed, "not holding " + action.obj});
      const ObjectInstance* recep = nullptr;
      if (auto err = check_interactable(state, action.recep, &recep)) return fail(*err);
      if (!recep->attrs.is_receptacle)
        return fail({ActionErrorKind::not_interactable, action.recep + " is not a receptacle"});
      if (recep->attrs.openable && !recep->attrs.is_open)
        return fail({ActionErrorKind::precondition_failed, action.recep + " is closed"});

      std::vector<WorldEvent> events{{"put", action.obj}};
      ObjectInstance* mut = state.find(action.obj);
      mut->location =
          ObjectLocation{ObjectLocation::Kind::in_receptacle, {}, HeightBand::mid, action.recep};
      state.inventory.reset();
      // Appliance effects at placement time.
      if (recep->class_name == "fridge" && mut->attrs.temperature != Temperature::cold) {
        mut->attrs.temperature = Temperature::cold;
        events.push_back({"cooled", action.obj});
      } else if (recep->class_name == "microwave" && recep->attrs.is_on &&
                 mut->attrs.temperature != Temperature::hot) {
        mut->attrs.temperature = Temperature::hot;
        events.push_back({"heated", action.obj});
      } else if (recep->class_name == "sink") {
        const ObjectInstance* f = companion(state, *recep, "faucet");
        if (f && f->attrs.is_on && !mut->attrs.is_clean) {
          mut->attrs.is_clean = true;
          events.push_back({"cleaned", action.obj});
        }
      }
      return ok_result(std::move(events));
    }

    case ActionKind::toggle_on:
    case ActionKind::toggle_off: {
      bool on = action.kind == ActionKind::toggle_on;
      const ObjectInstance* obj = nullptr;
      if (auto err = check_interactable(state, action.obj, &obj)) return fail(*err);
      if (!obj->attrs.toggleable)
        return fail({ActionErrorKind::not_interactable, action.obj + " is not toggleable"});
      if (obj->attrs.is_on == on)
        return fail({ActionErrorKind::precondition_failed,
                     action.obj + (on ? " is already on" : " is already off")});
      std::vector<WorldEvent> events{{on ? "toggled_on" : "toggled_off", action.obj}};
      state.find(action.obj)->attrs.is_on = on;
      if (on && obj->class_name == "microwave") {
        for (const std::string& inner : state.contents_of(action.obj)) {
          ObjectInstance* o = state.find(inner);
          if (o->attrs.temperature != Temperature::hot) {
            o->attrs.temperature = Temperature::hot;
            events.push_back({"heated", inner});
          }
        }
      }
      if (on && obj->class_name == "faucet") {
        const ObjectInstance* sink = companion(state, *obj, "sink");
        if (sink) {
          for (const std::string& inner : state.contents_of(sink->id)) {
            ObjectInstance* o = state.find(inner);
            if (!o->attrs.is_clean) {
              o->attrs.is_clean = true;
              events.push_back({"cleaned", inner});
            }
          }
        }
      }
      return ok_result(std::move(events));
    }

    case ActionKind::slice: {
      const ObjectInstance* obj = nullptr;
      if (auto err = check_interactable(state, action.obj, &obj)) return fail(*err);
      if (!obj->attrs.sliceable)
        return fail({ActionErrorKind::not_interactable, action.obj + " is not sliceable"});
      if (obj->attrs.is_sliced)
        return fail({ActionErrorKind::precondition_failed, action.obj + " is already sliced"});
      bool holding_knife = false;
      if (state.inventory) {
        const ObjectInstance* held = state.find(*state.inventory);
        holding_knife = held && class_info(held->class_name).is_knife;
      }
      if (!holding_knife)
        return fail({ActionErrorKind::precondition_failed, "slicing requires a knife in hand"});
      state.find(action.obj)->attrs.is_sliced = true;
      return ok_result({{"sliced", action.obj}});
    }
  }
  return fail({ActionErrorKind::precondition_failed, "unhandled action"});
}

const char* band_name(HeightBand b) {
  switch (b) {
    case HeightBand::low: return "low";
    case HeightBand::mid: return "mid";
    case HeightBand::high: return "high";
  }
  return "?";
}

HeightBand band_from_name(const std::string& s) {
  if (s == "low") return HeightBand::low;
  if (s == "mid") return HeightBand::mid;
  if (s == "high") return HeightBand::high;
  throw std::invalid_argument("bad band: " + s);
}

const char* temperature_name(Temperature t) {
  switch (t) {
    case Temperature::room: return "room";
    case Temperature::hot: return "hot";
    case Temperature::cold: return "cold";
  }
  return "?";
}

Temperature temperature_from_name(const std::string& s) {
  if (s == "room") return Temperature::room;
  if (s == "hot") return Temperature::hot;
  if (s == "cold") return Temperature::cold;
  throw std::invalid_argument("bad temperature: " + s);
}

}  // namespace pap
