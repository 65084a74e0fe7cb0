#include "pap/scene_gen.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pap/common.hpp"
#include "pap/presearch.hpp"

namespace pap {

Json scene_config_to_json(const SceneConfig& cfg) {
  Json j;
  j["format"] = "config/1";
  j["grid_w"] = cfg.grid_w;
  j["grid_h"] = cfg.grid_h;
  j["min_receptacles"] = cfg.min_receptacles;
  j["max_receptacles"] = cfg.max_receptacles;
  j["min_movables"] = cfg.min_movables;
  j["max_movables"] = cfg.max_movables;
  j["p_open"] = cfg.p_open;
  j["force_closed"] = cfg.force_closed;
  j["with_sink_and_faucet"] = cfg.with_sink_and_faucet;
  j["with_fridge"] = cfg.with_fridge;
  j["with_microwave"] = cfg.with_microwave;
  j["with_lamp"] = cfg.with_lamp;
  j["with_knife"] = cfg.with_knife;
  j["require_movables"] = cfg.require_movables;
  j["style_id"] = cfg.style_id;
  return j;
}

SceneConfig scene_config_from_json(const Json& j) {
  SceneConfig cfg;
  cfg.grid_w = j.at("grid_w");
  cfg.grid_h = j.at("grid_h");
  cfg.min_receptacles = j.at("min_receptacles");
  cfg.max_receptacles = j.at("max_receptacles");
  cfg.min_movables = j.at("min_movables");
  cfg.max_movables = j.at("max_movables");
  cfg.p_open = j.at("p_open");
  cfg.force_closed = j.at("force_closed");
  cfg.with_sink_and_faucet = j.at("with_sink_and_faucet");
  cfg.with_fridge = j.at("with_fridge");
  cfg.with_microwave = j.at("with_microwave");
  cfg.with_lamp = j.at("with_lamp");
  cfg.with_knife = j.at("with_knife");
  cfg.require_movables = j.at("require_movables").get<std::vector<std::string>>();
  cfg.style_id = j.at("style_id");
  return cfg;
}

namespace {

// Style-derived skews: everything here comes from the style id hash only, so
// a style behaves the same across seeds and suites.
struct StyleParams {
  bool perimeter;
  bool start_center;
  bool prior_a;       // which movable-placement prior table to use
  double open_skew;
  std::vector<std::string> recep_pref;
};

StyleParams style_params(const std::string& style_id) {
  uint64_t h = fnv1a(style_id);
  StyleParams p;
  p.perimeter = (h >> 8) & 1;
  p.start_center = (h >> 9) & 1;
  p.prior_a = (h >> 10) & 1;
  p.open_skew = 0.5 + static_cast<double>((h >> 16) % 101) / 100.0;
  p.recep_pref = receptacle_classes();
  std::rotate(p.recep_pref.begin(),
              p.recep_pref.begin() + static_cast<long>(h % p.recep_pref.size()),
              p.recep_pref.end());
  return p;
}

enum class Group { food, ware, media };

Group group_of(const std::string& cls) {
  if (cls == "egg" || cls == "apple" || cls == "potato" || cls == "tomato" ||
      cls == "bread")
    return Group::food;
  if (cls == "mug" || cls == "plate" || cls == "fork" || cls == "knife")
    return Group::ware;
  return Group::media;
}

double prior_weight(bool table_a, Group g, const std::string& recep_class) {
  auto w = [&](std::initializer_list<std::pair<const char*, double>> entries,
               double fallback) {
    for (const auto& [name, weight] : entries)
      if (recep_class == name) return weight;
    return fallback;
  };
  if (table_a) {
    switch (g) {
      case Group::food:
        return w({{"fridge", 3}, {"countertop", 3}, {"table", 2}, {"cabinet", 1},
                  {"sink", 0.5}},
                 0.2);
      case Group::ware:
        return w({{"countertop", 3}, {"drawer", 2.5}, {"cabinet", 2}, {"table", 1.5},
                  {"sink", 1}},
                 0.2);
      case Group::media:
        return w({{"table", 3}, {"drawer", 1.5}, {"safe", 1.5}, {"cabinet", 1},
                  {"countertop", 0.8}},
                 0.1);
    }
  } else {
    switch (g) {
      case Group::food:
        return w({{"table", 2.5}, {"countertop", 2}, {"cabinet", 1.5}, {"fridge", 1.5},
                  {"microwave", 0.8}, {"sink", 0.8}},
                 0.3);
      case Group::ware:
        return w({{"sink", 2.5}, {"countertop", 2}, {"table", 2}, {"cabinet", 1},
                  {"drawer", 1}},
                 0.3);
      case Group::media:
        return w({{"safe", 2}, {"cabinet", 2}, {"drawer", 1.5}, {"table", 1.5},
                  {"countertop", 0.5}},
                 0.2);
    }
  }
  return 0.1;
}

bool far_enough(const std::vector<Cell>& taken, const Cell& c) {
  for (const Cell& t : taken)
    if (std::abs(t.x - c.x) <= 1 && std::abs(t.y - c.y) <= 1) return false;
  return true;
}

struct Attempt {
  SceneState state;
  bool ok = false;
};

ObjectAttrs attrs_for(const ClassInfo& info) {
  ObjectAttrs a;
  a.is_receptacle = info.is_receptacle;
  a.openable = info.openable;
  a.toggleable = info.toggleable;
  a.pickupable = info.pickupable;
  a.sliceable = info.sliceable;
  return a;
}

Attempt try_generate(const SceneConfig& cfg, const StyleParams& style, uint64_t seed) {
  Rng rng(seed);
  Attempt out;
  SceneState& s = out.state;
  s.grid_w = cfg.grid_w;
  s.grid_h = cfg.grid_h;
  s.style_id = cfg.style_id;

  // Receptacle classes for this scene: required ones first, then a styled
  // random walk over the preference order. At most one instance per class,
  // so class names identify receptacles unambiguously.
  std::vector<std::string> rclasses;
  auto add_class = [&](const std::string& c) {
    if (std::find(rclasses.begin(), rclasses.end(), c) == rclasses.end())
      rclasses.push_back(c);
  };
  if (cfg.with_sink_and_faucet) add_class("sink");
  if (cfg.with_fridge) add_class("fridge");
  if (cfg.with_microwave) add_class("microwave");
  if (cfg.with_knife) add_class("countertop");  // the knife's usual home
  int want = static_cast<int>(rng.uniform_int(cfg.min_receptacles, cfg.max_receptacles));
  want = std::max<int>(want, static_cast<int>(rclasses.size()));
  for (size_t walk = 0; static_cast<int>(rclasses.size()) < want; ++walk) {
    if (walk > 200) return out;
    const std::string& c = style.recep_pref[walk % style.recep_pref.size()];
    if (rng.bernoulli(0.65)) add_class(c);
  }

  // Footprint placement. Perimeter styles hug the walls; scatter styles use
  // the whole grid. Footprints keep one cell of clearance from each other so
  // an interaction pose always exists next to them.
  std::vector<Cell> candidates;
  for (int y = 0; y < s.grid_h; ++y)
    for (int x = 0; x < s.grid_w; ++x) {
      bool on_ring = x == 0 || y == 0 || x == s.grid_w - 1 || y == s.grid_h - 1;
      if (!style.perimeter || on_ring) candidates.push_back({x, y});
    }
  rng.shuffle(candidates);

  std::vector<Cell> taken;
  auto place_footprint = [&](const std::string& cls) -> std::optional<Cell> {
    for (const Cell& c : candidates) {
      if (s.is_blocked(c) || !far_enough(taken, c)) continue;
      const ClassInfo& info = class_info(cls);
      std::string id = cls + "_1";
      ObjectInstance obj;
      obj.id = id;
      obj.class_name = cls;
      obj.attrs = attrs_for(info);
      obj.location = {ObjectLocation::Kind::on_floor, c, info.band, ""};
      s.objects[id] = obj;
      s.blocked.push_back(c);
      taken.push_back(c);
      return c;
    }
    return std::nullopt;
  };

  std::optional<Cell> sink_cell;
  for (const std::string& cls : rclasses) {
    auto cell = place_footprint(cls);
    if (!cell) return out;
    if (cls == "sink") sink_cell = cell;
  }

  // The faucet sits in a cell orthogonally adjacent to the sink (the
  // clearance rule is waived for this pair).
  if (cfg.with_sink_and_faucet) {
    std::vector<Cell> dirs = {{0, -1}, {1, 0}, {0, 1}, {-1, 0}};
    rng.shuffle(dirs);
    bool placed = false;
    for (const Cell& d : dirs) {
      Cell c{sink_cell->x + d.x, sink_cell->y + d.y};
      if (!s.in_bounds(c) || s.is_blocked(c)) continue;
      const ClassInfo& info = class_info("faucet");
      ObjectInstance obj;
      obj.id = "faucet_1";
      obj.class_name = "faucet";
      obj.attrs = attrs_for(info);
      obj.location = {ObjectLocation::Kind::on_floor, c, info.band, ""};
      s.objects[obj.id] = obj;
      s.blocked.push_back(c);
      placed = true;
      break;
    }
    if (!placed) return out;
  }
  if (cfg.with_lamp && !place_footprint("lamp")) return out;

  // Door states.
  double p_open = cfg.force_closed ? 0.0 : std::min(1.0, cfg.p_open * style.open_skew);
  for (auto& [id, obj] : s.objects)
    if (obj.attrs.openable) obj.attrs.is_open = rng.bernoulli(p_open);

  // Agent start pose.
  std::vector<Cell> free_cells;
  for (int y = 0; y < s.grid_h; ++y)
    for (int x = 0; x < s.grid_w; ++x)
      if (!s.is_blocked({x, y})) free_cells.push_back({x, y});
  if (free_cells.empty()) return out;
  if (style.start_center) {
    double cx = (s.grid_w - 1) / 2.0, cy = (s.grid_h - 1) / 2.0;
    std::sort(free_cells.begin(), free_cells.end(), [&](const Cell& a, const Cell& b) {
      double da = std::hypot(a.x - cx, a.y - cy), db = std::hypot(b.x - cx, b.y - cy);
      if (da != db) return da < db;
      return a < b;
    });
    free_cells.resize(std::max<size_t>(1, free_cells.size() / 4));
  }
  s.agent.cell = rng.pick(free_cells);
  s.agent.rotation = static_cast<int>(rng.uniform_int(0, 3)) * 90;
  s.agent.horizon = 0;

  // Movables. Required classes first (copies go to distinct receptacles when
  // possible), then unique extra classes up to the styled count.
  std::vector<std::string> recep_ids;
  for (const auto& [id, obj] : s.objects)
    if (obj.attrs.is_receptacle) recep_ids.push_back(id);
  if (recep_ids.empty()) return out;

  std::map<std::string, int> class_count;
  auto place_movable = [&](const std::string& cls) {
    Group g = group_of(cls);
    std::vector<double> weights;
    double total = 0;
    for (const std::string& rid : recep_ids) {
      const ObjectInstance& recep = *s.find(rid);
      double w = prior_weight(style.prior_a, g, recep.class_name);
      if (cls == "knife" && recep.class_name == "countertop") w *= 6;
      // Spread copies of the same class over different receptacles.
      for (const std::string& inner : s.contents_of(rid))
        if (s.find(inner)->class_name == cls) w = 0;
      weights.push_back(w);
      total += w;
    }
    size_t chosen = 0;
    if (total <= 0) {
      chosen = rng.index(recep_ids.size());
    } else {
      double r = rng.uniform01() * total;
      double acc = 0;
      for (size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i];
        if (r < acc || i + 1 == weights.size()) {
          chosen = i;
          break;
        }
      }
    }
    int ordinal = ++class_count[cls];
    ObjectInstance obj;
    obj.id = cls + "_" + std::to_string(ordinal);
    obj.class_name = cls;
    obj.attrs = attrs_for(class_info(cls));
    obj.location = {ObjectLocation::Kind::in_receptacle, {}, HeightBand::mid,
                    recep_ids[chosen]};
    s.objects[obj.id] = obj;
  };

  std::vector<std::string> required = cfg.require_movables;
  if (cfg.with_knife &&
      std::find(required.begin(), required.end(), "knife") == required.end())
    required.push_back("knife");
  for (const std::string& cls : required) {
    if (!known_class(cls) || !class_info(cls).pickupable)
      throw std::invalid_argument("require_movables: not a movable class: " + cls);
    place_movable(cls);
  }

  int want_m = static_cast<int>(rng.uniform_int(cfg.min_movables, cfg.max_movables));
  int placed = 0;
  for (const auto& [cls, n] : class_count) placed += n;
  std::vector<std::string> extras;
  for (const std::string& cls : movable_classes())
    if (!class_count.count(cls)) extras.push_back(cls);
  rng.shuffle(extras);
  for (const std::string& cls : extras) {
    if (placed >= want_m) break;
    place_movable(cls);
    ++placed;
  }

  out.ok = true;
  return out;
}

}  // namespace

SceneState generate_scene(const SceneConfig& cfg, uint64_t seed) {
  if (cfg.grid_w < 4 || cfg.grid_h < 4)
    throw std::invalid_argument("grid too small");
  if (cfg.min_receptacles < 1 || cfg.max_receptacles < cfg.min_receptacles)
    throw std::invalid_argument("bad receptacle bounds");
  StyleParams style = style_params(cfg.style_id);
  uint64_t base = mix_seed(seed, fnv1a(cfg.style_id));
  for (uint64_t attempt = 0; attempt < 30; ++attempt) {
    Attempt a = try_generate(cfg, style, mix_seed(base, attempt));
    if (!a.ok) continue;
    a.state.rng_seed = seed;
    a.state.check_invariants();
    PresearchMap map = build_presearch_map(a.state);
    if (!map.unreachable.empty()) continue;
    bool all_posed = true;
    for (const auto& [id, obj] : a.state.objects) {
      const ClassInfo& info = class_info(obj.class_name);
      if ((info.is_receptacle || info.is_fixture) && !map.has_pose(id)) all_posed = false;
    }
    if (!all_posed) continue;
    return a.state;
  }
  throw std::runtime_error("generate_scene: no valid scene for seed " +
                           std::to_string(seed) + " style " + cfg.style_id);
}

}  // namespace pap
