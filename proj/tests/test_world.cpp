#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pap/common.hpp"
#include "pap/presearch.hpp"
#include "pap/scene_gen.hpp"
#include "pap/world.hpp"
#include "pap/world_json.hpp"

#include "helpers.hpp"

using namespace pap;
using pap_test::act;
using pap_test::make_obj;
using pap_test::tiny_scene;

TEST_CASE("class table basics") {
  CHECK(class_info("fridge").is_receptacle);
  CHECK(class_info("fridge").openable);
  CHECK(class_info("knife").is_knife);
  CHECK(class_info("laptop").pickupable);
  CHECK(class_info("laptop").openable);
  CHECK(class_info("apple").sliceable);
  CHECK(class_info("faucet").is_fixture);
  CHECK(class_info("faucet").toggleable);
  CHECK_FALSE(class_info("mug").is_receptacle);
  CHECK_THROWS_AS(class_info("dragon"), std::invalid_argument);
  CHECK(known_class("sink"));
  CHECK_FALSE(known_class("dragon"));
  for (const auto& c : receptacle_classes()) CHECK(class_info(c).is_receptacle);
  for (const auto& c : movable_classes()) CHECK(class_info(c).pickupable);
}

TEST_CASE("visibility: range, frustum, band, containment") {
  SceneState s = tiny_scene();
  // Facing 270 = -x from (2,3): fridge dead ahead at distance 2.
  CHECK(visible(s, "fridge_1"));
  CHECK(distance_to(s, "fridge_1") == doctest::Approx(2.0));
  // Microwave at 45 degrees off-axis is still inside the frustum.
  CHECK(visible(s, "microwave_1"));
  // Table is behind the agent.
  CHECK_FALSE(visible(s, "table_1"));
  // Contents of a closed fridge are hidden.
  CHECK_FALSE(visible(s, "mug_1"));
  s.find("fridge_1")->attrs.is_open = true;
  CHECK(visible(s, "mug_1"));
  // Held objects are never visible.
  s.find("mug_1")->location = {ObjectLocation::Kind::held, {}, HeightBand::mid, ""};
  s.inventory = "mug_1";
  CHECK_FALSE(visible(s, "mug_1"));

  // Low-band drawer needs the head tilted down.
  s.agent = {{1, 7}, 270, 0};
  CHECK_FALSE(visible(s, "drawer_1"));
  s.agent.horizon = 30;
  CHECK(visible(s, "drawer_1"));

  // Out of range.
  SceneState far = tiny_scene();
  far.agent = {{7, 0}, 270, 0};  // fridge at distance sqrt(49+9) ~ 7.6
  CHECK_FALSE(visible(far, "fridge_1"));
}

TEST_CASE("bbox geometry") {
  SceneState s = tiny_scene();
  s.find("fridge_1")->attrs.is_open = true;

  auto area_at = [&](Cell c) {
    s.agent = {c, 270, 0};
    for (const Detection& d : observe(s).detections)
      if (d.id == "fridge_1") return d.bbox.area();
    return -1.0;
  };
  double near = area_at({1, 3});
  double far = area_at({4, 3});
  CHECK(near > 0);
  CHECK(far > 0);
  CHECK(near > far);  // boxes shrink with distance

  // A contained object's box lies fully inside its receptacle's box.
  s.agent = {{2, 3}, 270, 0};
  Observation obs = observe(s);
  BBox fridge_box{}, mug_box{};
  bool saw_fridge = false, saw_mug = false;
  for (const Detection& d : obs.detections) {
    if (d.id == "fridge_1") fridge_box = d.bbox, saw_fridge = true;
    if (d.id == "mug_1") mug_box = d.bbox, saw_mug = true;
  }
  REQUIRE(saw_fridge);
  REQUIRE(saw_mug);
  CHECK(mug_box.area() > 0);
  CHECK(intersection_area(mug_box, fridge_box) == doctest::Approx(mug_box.area()));
}

TEST_CASE("open, pickup, close, put round trip with cooling") {
  SceneState s = tiny_scene();  // agent already in front of the fridge

  CHECK_FALSE(step(s, act(ActionKind::pickup, "mug_1"), nullptr).ok);  // hidden

  StepResult r = step(s, act(ActionKind::open, "fridge_1"), nullptr);
  CHECK(r.ok);
  CHECK(s.find("fridge_1")->attrs.is_open);
  CHECK_FALSE(step(s, act(ActionKind::open, "fridge_1"), nullptr).ok);  // already open

  CHECK(step(s, act(ActionKind::pickup, "mug_1"), nullptr).ok);
  CHECK(s.inventory == "mug_1");
  CHECK(s.find("mug_1")->location.kind == ObjectLocation::Kind::held);

  CHECK(step(s, act(ActionKind::close, "fridge_1"), nullptr).ok);

  // Putting into a closed fridge fails and leaves the state untouched.
  std::string before = scene_dump(s);
  StepResult put_closed = step(s, act(ActionKind::put, "mug_1", "fridge_1"), nullptr);
  CHECK_FALSE(put_closed.ok);
  CHECK(put_closed.error.kind == ActionErrorKind::precondition_failed);
  CHECK(scene_dump(s) == before);

  CHECK(step(s, act(ActionKind::open, "fridge_1"), nullptr).ok);
  StepResult put_open = step(s, act(ActionKind::put, "mug_1", "fridge_1"), nullptr);
  CHECK(put_open.ok);
  CHECK_FALSE(s.inventory.has_value());
  CHECK(s.find("mug_1")->location.receptacle_id == "fridge_1");
  CHECK(s.find("mug_1")->attrs.temperature == Temperature::cold);
  bool cooled_event = false;
  for (const WorldEvent& e : put_open.events)
    if (e.what == "cooled" && e.obj_id == "mug_1") cooled_event = true;
  CHECK(cooled_event);
}

TEST_CASE("microwave heats contents") {
  SceneState s = tiny_scene();
  s.agent = {{1, 5}, 270, 0};  // facing the microwave

  CHECK(step(s, act(ActionKind::open, "microwave_1"), nullptr).ok);
  CHECK(s.find("egg_1")->attrs.temperature == Temperature::room);
  StepResult on = step(s, act(ActionKind::toggle_on, "microwave_1"), nullptr);
  CHECK(on.ok);
  CHECK(s.find("egg_1")->attrs.temperature == Temperature::hot);

  // Putting while the appliance runs also heats.
  s.find("plate_1")->location = {ObjectLocation::Kind::held, {}, HeightBand::mid, ""};
  s.inventory = "plate_1";
  StepResult put = step(s, act(ActionKind::put, "plate_1", "microwave_1"), nullptr);
  CHECK(put.ok);
  CHECK(s.find("plate_1")->attrs.temperature == Temperature::hot);

  CHECK(step(s, act(ActionKind::toggle_off, "microwave_1"), nullptr).ok);
  CHECK_FALSE(step(s, act(ActionKind::toggle_off, "microwave_1"), nullptr).ok);
}

TEST_CASE("faucet cleans objects in the companion sink") {
  SceneState s = tiny_scene();
  s.agent = {{6, 3}, 90, 0};  // sink ahead, faucet diagonal
  CHECK(visible(s, "sink_1"));
  CHECK(visible(s, "faucet_1"));

  // Put a dirty plate into the sink, then run the water.
  s.find("plate_1")->location = {ObjectLocation::Kind::held, {}, HeightBand::mid, ""};
  s.inventory = "plate_1";
  CHECK(step(s, act(ActionKind::put, "plate_1", "sink_1"), nullptr).ok);
  CHECK_FALSE(s.find("plate_1")->attrs.is_clean);
  StepResult on = step(s, act(ActionKind::toggle_on, "faucet_1"), nullptr);
  CHECK(on.ok);
  CHECK(s.find("plate_1")->attrs.is_clean);

  // Order reversed also works: water already running when the mug arrives.
  s.find("mug_1")->location = {ObjectLocation::Kind::held, {}, HeightBand::mid, ""};
  s.inventory = "mug_1";
  StepResult put = step(s, act(ActionKind::put, "mug_1", "sink_1"), nullptr);
  CHECK(put.ok);
  CHECK(s.find("mug_1")->attrs.is_clean);
}

TEST_CASE("pickup rules: laptop lid, full hands, reach") {
  SceneState s = tiny_scene();
  s.agent = {{4, 2}, 0, 0};  // facing the table at distance 2
  CHECK(visible(s, "laptop_1"));

  s.find("laptop_1")->attrs.is_open = true;
  StepResult open_pick = step(s, act(ActionKind::pickup, "laptop_1"), nullptr);
  CHECK_FALSE(open_pick.ok);
  CHECK(open_pick.error.kind == ActionErrorKind::precondition_failed);
  CHECK(step(s, act(ActionKind::close, "laptop_1"), nullptr).ok);
  CHECK(step(s, act(ActionKind::pickup, "laptop_1"), nullptr).ok);

  // Hands already full.
  StepResult second = step(s, act(ActionKind::pickup, "apple_1"), nullptr);
  CHECK_FALSE(second.ok);
  CHECK(second.error.kind == ActionErrorKind::precondition_failed);

  // Visible but too far to touch.
  SceneState far = tiny_scene();
  far.agent = {{4, 4}, 0, 0};  // table at distance 4
  CHECK(visible(far, "table_1"));
  StepResult reach = step(far, act(ActionKind::pickup, "apple_1"), nullptr);
  CHECK_FALSE(reach.ok);
  CHECK(reach.error.kind == ActionErrorKind::not_interactable);

  // Unknown ids are their own error kind.
  StepResult unknown = step(far, act(ActionKind::pickup, "dragon_1"), nullptr);
  CHECK_FALSE(unknown.ok);
  CHECK(unknown.error.kind == ActionErrorKind::unknown_id);
}

TEST_CASE("slicing requires a knife in hand") {
  SceneState s = tiny_scene();
  s.agent = {{4, 2}, 0, 0};
  StepResult bare = step(s, act(ActionKind::slice, "apple_1"), nullptr);
  CHECK_FALSE(bare.ok);
  CHECK(bare.error.kind == ActionErrorKind::precondition_failed);

  CHECK(step(s, act(ActionKind::pickup, "knife_1"), nullptr).ok);
  CHECK(step(s, act(ActionKind::slice, "apple_1"), nullptr).ok);
  CHECK(s.find("apple_1")->attrs.is_sliced);
  CHECK_FALSE(step(s, act(ActionKind::slice, "apple_1"), nullptr).ok);  // already sliced

  StepResult plate = step(s, act(ActionKind::slice, "plate_1"), nullptr);
  CHECK_FALSE(plate.ok);
  CHECK(plate.error.kind == ActionErrorKind::not_interactable);
}

TEST_CASE("toggling a lamp, lid checks on non-openables") {
  SceneState s = tiny_scene();
  s.agent = {{6, 7}, 90, 0};
  CHECK(step(s, act(ActionKind::toggle_on, "lamp_1"), nullptr).ok);
  CHECK(s.find("lamp_1")->attrs.is_on);
  StepResult open_lamp = step(s, act(ActionKind::open, "lamp_1"), nullptr);
  CHECK_FALSE(open_lamp.ok);
  CHECK(open_lamp.error.kind == ActionErrorKind::not_interactable);
}

TEST_CASE("presearch map covers every receptacle and movable") {
  SceneState s = tiny_scene();
  PresearchMap map = build_presearch_map(s);
  for (const char* id : {"fridge_1", "microwave_1", "drawer_1", "table_1", "sink_1",
                         "faucet_1", "lamp_1"})
    CHECK(map.has_pose(id));
  CHECK(map.unreachable.empty());
  REQUIRE(map.movable.count("mug_1"));
  CHECK(map.movable.at("mug_1").receptacle_id == "fridge_1");

  // A pre-searched pose really is an interaction pose.
  SceneState probe = s;
  probe.agent = *map.pose_of("fridge_1");
  CHECK(visible(probe, "fridge_1"));
  CHECK(distance_to(probe, "fridge_1") <= kInteractRange + 1e-9);

  // Reachable cells start at the agent and stay connected.
  REQUIRE_FALSE(map.reachable_cells.empty());
  CHECK(map.reachable_cells.front() == s.agent.cell);
  for (const Cell& c : map.reachable_cells) CHECK_FALSE(s.is_blocked(c));

  // The map does not depend on where the agent currently stands.
  SceneState moved = s;
  moved.agent = {{5, 5}, 0, 0};
  PresearchMap map2 = build_presearch_map(moved);
  CHECK(map2.receptacle_pose == map.receptacle_pose);
}

TEST_CASE("navigate teleports to the pre-searched pose") {
  SceneState s = tiny_scene();
  PresearchMap map = build_presearch_map(s);

  // Navigating to a contained movable goes to its current container.
  CHECK(step(s, act(ActionKind::navigate, "mug_1"), &map).ok);
  CHECK(s.agent == *map.pose_of("fridge_1"));
  CHECK(visible(s, "fridge_1"));

  // Late binding: once the mug moves, navigate follows the new container.
  s.find("mug_1")->location = {ObjectLocation::Kind::in_receptacle, {}, HeightBand::mid,
                               "table_1"};
  CHECK(step(s, act(ActionKind::navigate, "mug_1"), &map).ok);
  CHECK(s.agent == *map.pose_of("table_1"));

  // Held objects: navigate is a no-op success.
  s.find("mug_1")->location = {ObjectLocation::Kind::held, {}, HeightBand::mid, ""};
  s.inventory = "mug_1";
  ScenePose before = s.agent;
  CHECK(step(s, act(ActionKind::navigate, "mug_1"), &map).ok);
  CHECK(s.agent == before);

  // Without a map navigation cannot run.
  CHECK_FALSE(step(s, act(ActionKind::navigate, "fridge_1"), nullptr).ok);
}

TEST_CASE("scene generation is deterministic and sound") {
  SceneConfig cfg;
  cfg.with_sink_and_faucet = true;
  cfg.with_fridge = true;
  cfg.with_microwave = true;
  cfg.with_lamp = true;
  cfg.with_knife = true;
  cfg.style_id = "s0";

  SceneState a = generate_scene(cfg, 42);
  SceneState b = generate_scene(cfg, 42);
  CHECK(scene_dump(a) == scene_dump(b));
  SceneState c = generate_scene(cfg, 43);
  CHECK(scene_dump(a) != scene_dump(c));

  for (uint64_t seed = 0; seed < 25; ++seed) {
    SceneState s = generate_scene(cfg, seed);
    s.check_invariants();
    PresearchMap map = build_presearch_map(s);
    CHECK(map.unreachable.empty());
    // Every movable sits in a receptacle; nothing starts held or on the floor.
    for (const auto& [id, obj] : s.objects)
      if (obj.attrs.pickupable)
        CHECK(obj.location.kind == ObjectLocation::Kind::in_receptacle);
    CHECK(s.find("sink_1") != nullptr);
    CHECK(s.find("faucet_1") != nullptr);
    CHECK(s.find("knife_1") != nullptr);
  }

  // Styles change the distribution: different style, same seed, different scene.
  SceneConfig other = cfg;
  other.style_id = "u1";
  CHECK(scene_dump(generate_scene(other, 42)) != scene_dump(a));

  // force_closed pins every openable door shut.
  SceneConfig closed = cfg;
  closed.force_closed = true;
  closed.p_open = 0.9;
  for (uint64_t seed = 0; seed < 10; ++seed) {
    SceneState s = generate_scene(closed, seed);
    for (const auto& [id, obj] : s.objects)
      if (obj.attrs.openable) CHECK_FALSE(obj.attrs.is_open);
  }

  // Required duplicate movables land in distinct receptacles.
  SceneConfig dup = cfg;
  dup.require_movables = {"apple", "apple", "apple"};
  SceneState s = generate_scene(dup, 7);
  std::set<std::string> homes;
  for (const char* id : {"apple_1", "apple_2", "apple_3"})
    homes.insert(s.find(id)->location.receptacle_id);
  CHECK(homes.size() == 3);
}

TEST_CASE("scene and presearch JSON round-trip byte-stably") {
  SceneConfig cfg;
  cfg.with_sink_and_faucet = true;
  cfg.with_knife = true;
  SceneState s = generate_scene(cfg, 11);
  s.find("knife_1")->attrs.temperature = Temperature::cold;  // exercise the enum

  Json j = scene_to_json(s);
  SceneState back = scene_from_json(j);
  CHECK(scene_to_json(back).dump() == j.dump());
  back.check_invariants();

  PresearchMap map = build_presearch_map(s);
  Json pj = presearch_to_json(map);
  PresearchMap mback = presearch_from_json(pj);
  CHECK(presearch_to_json(mback).dump() == pj.dump());

  Json cj = scene_config_to_json(cfg);
  CHECK(scene_config_to_json(scene_config_from_json(cj)).dump() == cj.dump());
}

TEST_CASE("invariant checker rejects corrupt states") {
  SceneState s = tiny_scene();
  s.find("table_1")->attrs.is_open = true;  // not openable
  CHECK_THROWS_AS(s.check_invariants(), std::runtime_error);

  SceneState s2 = tiny_scene();
  s2.find("apple_1")->location.receptacle_id = "ghost_1";
  CHECK_THROWS_AS(s2.check_invariants(), std::runtime_error);

  SceneState s3 = tiny_scene();
  s3.inventory = "apple_1";  // claims held, object says otherwise
  CHECK_THROWS_AS(s3.check_invariants(), std::runtime_error);
}

TEST_CASE("failed actions never mutate state") {
  SceneConfig cfg;
  cfg.with_sink_and_faucet = true;
  cfg.with_fridge = true;
  cfg.with_microwave = true;
  cfg.with_lamp = true;
  cfg.with_knife = true;
  SceneState s = generate_scene(cfg, 99);
  PresearchMap map = build_presearch_map(s);

  std::vector<std::string> ids{"bogus_1"};
  for (const auto& [id, obj] : s.objects) ids.push_back(id);

  Rng rng(2024);
  static const ActionKind kKinds[] = {
      ActionKind::navigate, ActionKind::navigate_pos, ActionKind::rotate_to,
      ActionKind::look_to,  ActionKind::open,         ActionKind::close,
      ActionKind::pickup,   ActionKind::put,          ActionKind::toggle_on,
      ActionKind::toggle_off, ActionKind::slice,      ActionKind::stop};
  int failures = 0;
  for (int i = 0; i < 10000; ++i) {
    AtomicAction a;
    a.kind = kKinds[rng.index(12)];
    a.obj = rng.pick(ids);
    a.recep = rng.pick(ids);
    a.cell = {static_cast<int>(rng.uniform_int(-2, 9)),
              static_cast<int>(rng.uniform_int(-2, 9))};
    a.rotation = static_cast<int>(rng.uniform_int(0, 5)) * 45;  // half invalid
    a.horizon = static_cast<int>(rng.uniform_int(-2, 2)) * 30;
    std::string before = scene_dump(s);
    StepResult r = step(s, a, &map);
    if (!r.ok) {
      ++failures;
      CHECK(scene_dump(s) == before);
      if (scene_dump(s) != before) break;  // stop flooding on first corruption
    } else {
      s.check_invariants();
    }
  }
  CHECK(failures > 1000);  // the fuzz actually hit failing actions
}
