#pragma once

#include "pap/jsonio.hpp"
#include "pap/presearch.hpp"
#include "pap/world.hpp"

namespace pap {

// scene/1 and presearch/1 on-disk formats. Serialization is byte-stable:
// dump(from_json(j)) == dump(j) for any value produced here.

Json pose_to_json(const ScenePose& pose);
ScenePose pose_from_json(const Json& j);

Json scene_to_json(const SceneState& state);
SceneState scene_from_json(const Json& j);

Json presearch_to_json(const PresearchMap& map);
PresearchMap presearch_from_json(const Json& j);

// Canonical serialized form, used for exact state comparisons.
std::string scene_dump(const SceneState& state);

}  // namespace pap
