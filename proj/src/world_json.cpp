#include "pap/world_json.hpp"

#include <stdexcept>

namespace pap {

namespace {

Json cell_to_json(const Cell& c) { return Json::array({c.x, c.y}); }

Cell cell_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw std::runtime_error("bad cell");
  return {j[0].get<int>(), j[1].get<int>()};
}

Json attrs_to_json(const ObjectAttrs& a) {
  Json j;
  j["is_receptacle"] = a.is_receptacle;
  j["openable"] = a.openable;
  j["is_open"] = a.is_open;
  j["toggleable"] = a.toggleable;
  j["is_on"] = a.is_on;
  j["pickupable"] = a.pickupable;
  j["sliceable"] = a.sliceable;
  j["is_sliced"] = a.is_sliced;
  j["temperature"] = temperature_name(a.temperature);
  j["is_clean"] = a.is_clean;
  return j;
}

ObjectAttrs attrs_from_json(const Json& j) {
  ObjectAttrs a;
  a.is_receptacle = j.at("is_receptacle");
  a.openable = j.at("openable");
  a.is_open = j.at("is_open");
  a.toggleable = j.at("toggleable");
  a.is_on = j.at("is_on");
  a.pickupable = j.at("pickupable");
  a.sliceable = j.at("sliceable");
  a.is_sliced = j.at("is_sliced");
  a.temperature = temperature_from_name(j.at("temperature"));
  a.is_clean = j.at("is_clean");
  return a;
}

Json location_to_json(const ObjectLocation& loc) {
  Json j;
  switch (loc.kind) {
    case ObjectLocation::Kind::on_floor:
      j["kind"] = "on_floor";
      j["cell"] = cell_to_json(loc.cell);
      j["band"] = band_name(loc.band);
      break;
    case ObjectLocation::Kind::in_receptacle:
      j["kind"] = "in_receptacle";
      j["receptacle"] = loc.receptacle_id;
      break;
    case ObjectLocation::Kind::held:
      j["kind"] = "held";
      break;
  }
  return j;
}

ObjectLocation location_from_json(const Json& j) {
  ObjectLocation loc;
  std::string kind = j.at("kind");
  if (kind == "on_floor") {
    loc.kind = ObjectLocation::Kind::on_floor;
    loc.cell = cell_from_json(j.at("cell"));
    loc.band = band_from_name(j.at("band"));
  } else if (kind == "in_receptacle") {
    loc.kind = ObjectLocation::Kind::in_receptacle;
    loc.receptacle_id = j.at("receptacle");
  } else if (kind == "held") {
    loc.kind = ObjectLocation::Kind::held;
  } else {
    throw std::runtime_error("bad location kind: " + kind);
  }
  return loc;
}

}  // namespace

Json pose_to_json(const ScenePose& pose) {
  Json j;
  j["cell"] = cell_to_json(pose.cell);
  j["rotation"] = pose.rotation;
  j["horizon"] = pose.horizon;
  return j;
}

ScenePose pose_from_json(const Json& j) {
  ScenePose p;
  p.cell = cell_from_json(j.at("cell"));
  p.rotation = j.at("rotation");
  p.horizon = j.at("horizon");
  return p;
}

Json scene_to_json(const SceneState& state) {
  Json j;
  j["format"] = "scene/1";
  j["grid_w"] = state.grid_w;
  j["grid_h"] = state.grid_h;
  Json blocked = Json::array();
  for (const Cell& c : state.blocked) blocked.push_back(cell_to_json(c));
  j["blocked"] = blocked;
  j["agent"] = pose_to_json(state.agent);
  j["inventory"] = state.inventory ? Json(*state.inventory) : Json(nullptr);
  j["rng_seed"] = state.rng_seed;
  j["style_id"] = state.style_id;
  Json objects = Json::array();
  for (const auto& [id, obj] : state.objects) {
    Json o;
    o["id"] = obj.id;
    o["class"] = obj.class_name;
    o["attrs"] = attrs_to_json(obj.attrs);
    o["location"] = location_to_json(obj.location);
    objects.push_back(o);
  }
  j["objects"] = objects;
  return j;
}

SceneState scene_from_json(const Json& j) {
  if (j.at("format") != "scene/1")
    throw std::runtime_error("unsupported scene format");
  SceneState s;
  s.grid_w = j.at("grid_w");
  s.grid_h = j.at("grid_h");
  for (const Json& c : j.at("blocked")) s.blocked.push_back(cell_from_json(c));
  s.agent = pose_from_json(j.at("agent"));
  if (!j.at("inventory").is_null()) s.inventory = j.at("inventory").get<std::string>();
  s.rng_seed = j.at("rng_seed");
  s.style_id = j.at("style_id");
  for (const Json& o : j.at("objects")) {
    ObjectInstance obj;
    obj.id = o.at("id");
    obj.class_name = o.at("class");
    obj.attrs = attrs_from_json(o.at("attrs"));
    obj.location = location_from_json(o.at("location"));
    s.objects[obj.id] = obj;
  }
  return s;
}

Json presearch_to_json(const PresearchMap& map) {
  Json j;
  j["format"] = "presearch/1";
  Json poses = Json::array();
  for (const auto& [id, pose] : map.receptacle_pose) {
    Json e;
    e["id"] = id;
    e["pose"] = pose_to_json(pose);
    poses.push_back(e);
  }
  j["receptacle_pose"] = poses;
  Json movable = Json::array();
  for (const auto& [id, entry] : map.movable) {
    Json e;
    e["id"] = id;
    e["receptacle"] = entry.receptacle_id;
    e["pose"] = pose_to_json(entry.pose);
    movable.push_back(e);
  }
  j["movable"] = movable;
  j["unreachable"] = map.unreachable;
  Json cells = Json::array();
  for (const Cell& c : map.reachable_cells) cells.push_back(cell_to_json(c));
  j["reachable_cells"] = cells;
  return j;
}

PresearchMap presearch_from_json(const Json& j) {
  if (j.at("format") != "presearch/1")
    throw std::runtime_error("unsupported presearch format");
  PresearchMap map;
  for (const Json& e : j.at("receptacle_pose"))
    map.receptacle_pose[e.at("id")] = pose_from_json(e.at("pose"));
  for (const Json& e : j.at("movable"))
    map.movable[e.at("id")] = {e.at("receptacle"), pose_from_json(e.at("pose"))};
  map.unreachable = j.at("unreachable").get<std::vector<std::string>>();
  for (const Json& c : j.at("reachable_cells"))
    map.reachable_cells.push_back(cell_from_json(c));
  return map;
}

std::string scene_dump(const SceneState& state) { return scene_to_json(state).dump(); }

}  // namespace pap
