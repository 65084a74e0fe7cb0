#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pap/world.hpp"

namespace pap {

// Per-scene map of the best interaction pose for every receptacle and
// fixture, plus the recorded containing receptacle of every movable object.
// Built once per scene; immutable afterwards and safe to share.
class PresearchMap {
 public:
  struct MovableEntry {
    std::string receptacle_id;  // where the object was when the map was built
    ScenePose pose;             // that receptacle's best pose
  };

  std::map<std::string, ScenePose> receptacle_pose;   // receptacle/fixture id -> pose
  std::map<std::string, MovableEntry> movable;        // movable id -> entry
  std::vector<std::string> unreachable;               // ids with no usable pose

  bool has_pose(const std::string& id) const {
    return receptacle_pose.count(id) > 0;
  }
  std::optional<ScenePose> pose_of(const std::string& id) const;

  // Reachable cells in breadth-first order from the agent's start cell, so
  // enumeration visits near cells before far ones.
  std::vector<Cell> reachable_cells;
};

// Scans every reachable cell at every rotation and horizon, scoring poses by
// visible bbox area within interaction range. Deterministic and independent
// of the agent's pose in `state`.
PresearchMap build_presearch_map(const SceneState& state);

}  // namespace pap
