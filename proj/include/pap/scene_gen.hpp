#pragma once

#include <string>
#include <vector>

#include "pap/jsonio.hpp"
#include "pap/world.hpp"

namespace pap {

// Knobs for the scene generator. The style id additionally skews placement
// pattern, receptacle preferences and start pose, so different styles give
// visibly different scene distributions for the same config.
struct SceneConfig {
  int grid_w = 8;
  int grid_h = 8;
  int min_receptacles = 4;
  int max_receptacles = 7;
  int min_movables = 3;
  int max_movables = 7;
  double p_open = 0.0;       // chance an openable receptacle starts open
  bool force_closed = false; // overrides p_open: openable receptacles start closed
  bool with_sink_and_faucet = false;
  bool with_fridge = false;
  bool with_microwave = false;
  bool with_lamp = false;
  bool with_knife = false;
  // Class names that must appear as movables; duplicates give extra copies,
  // placed in distinct receptacles when possible.
  std::vector<std::string> require_movables;
  std::string style_id = "s0";
};

Json scene_config_to_json(const SceneConfig& cfg);
SceneConfig scene_config_from_json(const Json& j);

// Deterministic: the same (cfg, seed) always yields the same scene. Throws
// std::runtime_error if no valid scene can be found for the seed.
SceneState generate_scene(const SceneConfig& cfg, uint64_t seed);

}  // namespace pap
