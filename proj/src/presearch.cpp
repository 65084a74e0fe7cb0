#include "pap/presearch.hpp"

#include <algorithm>
#include <deque>

namespace pap {

std::optional<ScenePose> PresearchMap::pose_of(const std::string& id) const {
  auto it = receptacle_pose.find(id);
  if (it != receptacle_pose.end()) return it->second;
  auto mv = movable.find(id);
  if (mv != movable.end()) return mv->second.pose;
  return std::nullopt;
}

PresearchMap build_presearch_map(const SceneState& state) {
  PresearchMap map;

  // Reachable cells, breadth-first from the agent's start cell.
  auto idx = [&](const Cell& c) { return c.y * state.grid_w + c.x; };
  std::vector<char> seen(static_cast<size_t>(state.grid_w) * state.grid_h, 0);
  std::deque<Cell> queue;
  if (state.in_bounds(state.agent.cell) && !state.is_blocked(state.agent.cell)) {
    queue.push_back(state.agent.cell);
    seen[idx(state.agent.cell)] = 1;
  }
  static const Cell kDirs[] = {{0, -1}, {1, 0}, {0, 1}, {-1, 0}};
  while (!queue.empty()) {
    Cell c = queue.front();
    queue.pop_front();
    map.reachable_cells.push_back(c);
    for (const Cell& d : kDirs) {
      Cell n{c.x + d.x, c.y + d.y};
      if (!state.in_bounds(n) || state.is_blocked(n) || seen[idx(n)]) continue;
      seen[idx(n)] = 1;
      queue.push_back(n);
    }
  }

  // Best interaction pose per receptacle/fixture: the pose giving the largest
  // bbox within interaction range. Scan order is row-major over the reachable
  // set, then rotation, then horizon, so ties resolve the same way regardless
  // of where the agent happens to stand.
  std::vector<Cell> scan = map.reachable_cells;
  std::sort(scan.begin(), scan.end(), [](const Cell& a, const Cell& b) {
    return a.y != b.y ? a.y < b.y : a.x < b.x;
  });
  SceneState scratch = state;
  std::map<std::string, double> best_area;
  for (const Cell& cell : scan) {
    for (int rot : {0, 90, 180, 270}) {
      for (int hor : {-30, 0, 30}) {
        scratch.agent = ScenePose{cell, rot, hor};
        Observation obs = observe(scratch);
        for (const Detection& det : obs.detections) {
          const ObjectInstance* obj = state.find(det.id);
          if (obj->location.kind != ObjectLocation::Kind::on_floor) continue;
          const ClassInfo& info = class_info(obj->class_name);
          if (!info.is_receptacle && !info.is_fixture) continue;
          if (distance_to(scratch, det.id) > kInteractRange + 1e-9) continue;
          double area = det.bbox.area();
          if (area > best_area[det.id] + 1e-12) {
            best_area[det.id] = area;
            map.receptacle_pose[det.id] = scratch.agent;
          }
        }
      }
    }
  }

  // Movables are reached via whatever contained them when the map was built.
  for (const auto& [id, obj] : state.objects) {
    const ClassInfo& info = class_info(obj.class_name);
    if (info.is_receptacle || info.is_fixture) {
      if (obj.location.kind == ObjectLocation::Kind::on_floor && !map.has_pose(id))
        map.unreachable.push_back(id);
      continue;
    }
    if (obj.location.kind != ObjectLocation::Kind::in_receptacle) continue;
    auto pose = map.pose_of(obj.location.receptacle_id);
    if (pose)
      map.movable[id] = {obj.location.receptacle_id, *pose};
    else
      map.unreachable.push_back(id);
  }
  return map;
}

}  // namespace pap
