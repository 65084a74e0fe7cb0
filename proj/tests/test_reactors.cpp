#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <memory>

#include "pap/dsl/parser.hpp"
#include "pap/dsl/validate.hpp"
#include "pap/interp/interpreter.hpp"
#include "pap/interp/reactors.hpp"
#include "pap/interp/session.hpp"
#include "pap/interp/value.hpp"
#include "pap/world_json.hpp"

#include "helpers.hpp"

using namespace pap;
using namespace pap::interp;
using pap_test::act;
using pap_test::make_obj;
using pap_test::tiny_scene;

namespace {

// A small pick-and-place library in the procedure language. Reactors are
// queried at run time, so the same text adapts to open or closed containers.
const char* kLib = R"(
proc udp_pickup_object(tar_obj) {
  let find = reactor "find_recep";
  let check = reactor "check_obj_attr";
  let recep = find(tar_obj);
  if recep == NONE {
    atomic pickup(tar_obj);
    return true;
  }
  atomic navigate(recep);
  let openable = check(recep, "openable");
  let opened = false;
  if openable {
    let is_open = check(recep, "is_open");
    if not is_open {
      atomic open(recep);
      opened = true;
    }
  }
  atomic pickup(tar_obj);
  if opened {
    atomic close(recep);
  }
  return true;
}

proc udp_put_object(tar_obj, tar_recep) {
  let check = reactor "check_obj_attr";
  atomic navigate(tar_recep);
  let openable = check(tar_recep, "openable");
  let opened = false;
  if openable {
    let is_open = check(tar_recep, "is_open");
    if not is_open {
      atomic open(tar_recep);
      opened = true;
    }
  }
  atomic put(tar_obj, tar_recep);
  if opened {
    atomic close(tar_recep);
  }
  return true;
}

proc udp_pick_and_put_object(tar_obj, tar_recep) {
  udp_pickup_object(tar_obj);
  udp_put_object(tar_obj, tar_recep);
  return true;
}

proc udp_empty_recep(tar_recep, dst_recep) {
  let find_all = reactor "find_all_obj";
  let objs = find_all(tar_recep);
  for obj in objs {
    udp_pick_and_put_object(obj, dst_recep);
  }
  return true;
}
)";

dsl::Program lib() {
  dsl::Program p = dsl::parse_program(kLib);
  dsl::validate_or_throw(p);
  return p;
}

struct Fixture {
  SceneState scene;
  std::shared_ptr<PresearchMap> map;
  Fixture() : scene(tiny_scene()) {
    map = std::make_shared<PresearchMap>(build_presearch_map(scene));
  }
  EnvSession session(NoiseSpec noise = {}) const {
    return EnvSession(scene, map, noise);
  }
};

CallEntry proc_call(const std::string& name, std::vector<Value> args) {
  return {name, std::move(args), false};
}

std::vector<std::string> described(const std::vector<AtomicAction>& atomics) {
  std::vector<std::string> out;
  for (const AtomicAction& a : atomics) out.push_back(describe(a));
  return out;
}

}  // namespace

TEST_CASE("visual containment rule thresholds") {
  BBox obj{0, 0, 1, 1};  // unit area
  auto recep_with_overlap = [](double r) { return BBox{0, 0, r, 1}; };
  // "Over 70%" is strict: exactly 0.70 is not contained.
  CHECK_FALSE(rel_from_boxes(obj, recep_with_overlap(0.69)));
  CHECK_FALSE(rel_from_boxes(obj, recep_with_overlap(0.70)));
  CHECK(rel_from_boxes(obj, recep_with_overlap(0.71)));
  CHECK(rel_from_boxes(obj, recep_with_overlap(1.0)));
  CHECK_FALSE(rel_from_boxes(obj, BBox{5, 5, 6, 6}));  // disjoint
  // The rule is scale-invariant.
  for (double s : {0.25, 3.0, 40.0}) {
    auto scale = [s](BBox b) { return BBox{b.x0 * s, b.y0 * s, b.x1 * s, b.y1 * s}; };
    CHECK(rel_from_boxes(scale(obj), scale(recep_with_overlap(0.71))));
    CHECK_FALSE(rel_from_boxes(scale(obj), scale(recep_with_overlap(0.69))));
  }
  // Degenerate object boxes never count as contained...
  CHECK_FALSE(rel_from_boxes(BBox{0, 0, 0, 0}, recep_with_overlap(1.0)));
  // ...and the typed entry point refuses them outright.
  CHECK(rel_checker_heuristic(obj, recep_with_overlap(0.71)) == RelAnswer::obj_in_recep);
  CHECK(rel_checker_heuristic(obj, recep_with_overlap(0.69)) == RelAnswer::not_in);
  CHECK_THROWS_AS(rel_checker_heuristic(BBox{0, 0, 0, 0}, obj), std::invalid_argument);
}

TEST_CASE("noise channel: stable per object, rate close to epsilon") {
  Observation obs;
  for (int i = 0; i < 10000; ++i) {
    Detection d;
    d.id = "obj_" + std::to_string(i);
    d.class_name = "mug";
    d.bbox = {0, 0, 1, 1};
    obs.detections.push_back(d);
  }

  NoiseSpec flips{0.1, 0.0, 7};
  Observation noisy = apply_noise(obs, flips);
  REQUIRE(noisy.detections.size() == obs.detections.size());
  int flipped = 0;
  for (const Detection& d : noisy.detections)
    if (d.class_name != "mug") ++flipped;
  double rate = flipped / 10000.0;
  CHECK(rate > 0.08);
  CHECK(rate < 0.12);
  // A flip never lands on the true class, so the rate is exact, and the
  // channel is a pure function of (seed, id).
  Observation again = apply_noise(obs, flips);
  for (size_t i = 0; i < noisy.detections.size(); ++i)
    CHECK(noisy.detections[i].class_name == again.detections[i].class_name);
  Observation other_seed = apply_noise(obs, NoiseSpec{0.1, 0.0, 8});
  int differs = 0;
  for (size_t i = 0; i < noisy.detections.size(); ++i)
    if (noisy.detections[i].class_name != other_seed.detections[i].class_name) ++differs;
  CHECK(differs > 100);

  NoiseSpec misses{0.0, 0.1, 7};
  Observation dropped = apply_noise(obs, misses);
  double miss_rate = 1.0 - dropped.detections.size() / 10000.0;
  CHECK(miss_rate > 0.08);
  CHECK(miss_rate < 0.12);

  // Noise off is an exact pass-through.
  Observation clean = apply_noise(obs, NoiseSpec{});
  CHECK(clean.detections.size() == obs.detections.size());
}

TEST_CASE("oracle reactors answer from ground truth") {
  Fixture f;
  EnvSession s = f.session();
  ReactorRegistry reg = oracle_registry();

  SUBCASE("find_recep follows current containment") {
    Value r = reg.query("find_recep", {Value::of(std::string("mug"))}, s);
    REQUIRE(r.is_obj());
    CHECK(r.as_obj().id == "fridge_1");
    CHECK(r.as_obj().cls == "fridge");
    // The alias answers identically.
    Value r2 = reg.query("find_obj_recep", {Value::of(std::string("mug"))}, s);
    CHECK(r2.as_obj().id == "fridge_1");
    // A top-level receptacle is in nothing.
    CHECK(reg.query("find_recep", {Value::of(std::string("fridge"))}, s).is_none());
    // Refs work too.
    Value r3 = reg.query("find_recep", {Value::of(ObjRef{"apple_1", "apple"})}, s);
    CHECK(r3.as_obj().id == "table_1");
  }

  SUBCASE("check_obj_attr reads live attributes") {
    auto attr = [&](const std::string& o, const std::string& a) {
      return reg.query("check_obj_attr",
                       {Value::of(o), Value::of(a)}, s).as_bool();
    };
    CHECK(attr("fridge", "openable"));
    CHECK_FALSE(attr("fridge", "is_open"));
    CHECK(attr("knife", "pickupable"));
    CHECK(attr("apple", "sliceable"));
    CHECK_FALSE(attr("apple", "is_sliced"));
    CHECK_FALSE(attr("mug", "is_cold"));
    s.state.find("fridge_1")->attrs.is_open = true;
    CHECK(attr("fridge", "is_open"));
    CHECK_THROWS(reg.query("check_obj_attr",
                           {Value::of(std::string("mug")),
                            Value::of(std::string("is_purple"))}, s));
    CHECK_THROWS(reg.query("check_obj_attr",
                           {Value::of(std::string("cd")),
                            Value::of(std::string("openable"))}, s));
  }

  SUBCASE("find_all_obj lists receptacle contents or class instances") {
    Value contents = reg.query("find_all_obj", {Value::of(std::string("table_1"))}, s);
    REQUIRE(contents.is_list());
    REQUIRE(contents.as_list().size() == 4);
    CHECK(contents.as_list()[0].as_obj().id == "apple_1");
    CHECK(contents.as_list()[3].as_obj().id == "plate_1");
    Value fridge = reg.query("find_all_obj", {Value::of(std::string("fridge"))}, s);
    REQUIRE(fridge.as_list().size() == 1);
    CHECK(fridge.as_list()[0].as_obj().id == "mug_1");
    Value mugs = reg.query("find_all_obj", {Value::of(std::string("mug"))}, s);
    REQUIRE(mugs.as_list().size() == 1);
    CHECK(mugs.as_list()[0].as_obj().id == "mug_1");
  }

  SUBCASE("check_obj_recep_rel is ground-truth containment") {
    auto rel = [&](const std::string& o, const std::string& r) {
      return reg.query("check_obj_recep_rel",
                       {Value::of(o), Value::of(r)}, s).as_str() == kRelInRecep;
    };
    CHECK(rel("mug", "fridge"));
    CHECK_FALSE(rel("mug", "table"));
    CHECK(rel("apple", "table"));
    CHECK_FALSE(rel("cd", "table"));  // unresolvable object reads as NOT_IN
    // Class arguments mean "any instance of the class"; this stays correct
    // even when another instance of the class sits closer to the agent.
    ObjectInstance mug2 = make_obj("mug_2", "mug");
    mug2.location = {ObjectLocation::Kind::in_receptacle, {}, HeightBand::mid,
                     "microwave_1"};
    s.state.objects["mug_2"] = mug2;
    CHECK(rel("mug", "microwave"));
    CHECK(rel("mug", "fridge"));
    CHECK_FALSE(rel("mug_2", "fridge"));  // ids stay per-instance
  }

  SUBCASE("detect_recep and gen_obj_mask respect the view") {
    Value receps = reg.query("detect_recep", {}, s);
    REQUIRE(receps.is_list());
    REQUIRE(receps.as_list().size() == 2);  // fridge and microwave from (2,3) facing -x
    CHECK(receps.as_list()[0].as_obj().id == "fridge_1");
    CHECK(receps.as_list()[1].as_obj().id == "microwave_1");

    CHECK(reg.query("gen_obj_mask", {Value::of(std::string("fridge"))}, s).is_obj());
    // Contents of a closed fridge have no mask until it opens.
    CHECK(reg.query("gen_obj_mask", {Value::of(std::string("mug"))}, s).is_none());
    s.state.find("fridge_1")->attrs.is_open = true;
    Value m = reg.query("gen_obj_mask", {Value::of(std::string("mug"))}, s);
    REQUIRE(m.is_obj());
    CHECK(m.as_obj().id == "mug_1");
  }
}

TEST_CASE("heuristic reactors believe the scan plus their own actions") {
  Fixture f;
  EnvSession s = f.session();
  ReactorRegistry reg = heuristic_registry();

  SUBCASE("initial beliefs come from the scan") {
    std::map<std::string, std::string> loc = believed_locations(s);
    CHECK(loc.at("mug_1") == "fridge_1");
    CHECK(loc.at("apple_1") == "table_1");
    Value r = reg.query("find_recep", {Value::of(std::string("mug"))}, s);
    REQUIRE(r.is_obj());
    CHECK(r.as_obj().id == "fridge_1");
    Value all = reg.query("find_all_obj", {Value::of(std::string("table"))}, s);
    CHECK(all.as_list().size() == 4);
  }

  SUBCASE("beliefs track successful pickups and puts") {
    REQUIRE(s.issue(act(ActionKind::navigate, "table_1")).ok);
    REQUIRE(s.issue(act(ActionKind::pickup, "apple_1")).ok);
    CHECK(believed_locations(s).at("apple_1") == "");
    // Held objects resolve to no receptacle.
    CHECK(reg.query("find_recep", {Value::of(std::string("apple"))}, s).is_none());
    REQUIRE(s.issue(act(ActionKind::navigate, "sink_1")).ok);
    REQUIRE(s.issue(act(ActionKind::put, "apple_1", "sink_1")).ok);
    CHECK(believed_locations(s).at("apple_1") == "sink_1");
    Value r = reg.query("find_recep", {Value::of(std::string("apple"))}, s);
    CHECK(r.as_obj().id == "sink_1");
    // Failed actions leave beliefs untouched.
    CHECK_FALSE(s.issue(act(ActionKind::pickup, "mug_1")).ok);  // fridge closed, far
    CHECK(believed_locations(s).at("mug_1") == "fridge_1");
  }

  SUBCASE("beliefs go stale when the world changes behind the log") {
    // Teleport the mug without telling the agent.
    auto* mug = s.state.find("mug_1");
    mug->location = {ObjectLocation::Kind::in_receptacle, {}, HeightBand::mid, "sink_1"};
    ReactorRegistry oracle = oracle_registry();
    Value truth = oracle.query("find_recep", {Value::of(std::string("mug"))}, s);
    Value belief = reg.query("find_recep", {Value::of(std::string("mug"))}, s);
    CHECK(truth.as_obj().id == "sink_1");
    CHECK(belief.as_obj().id == "fridge_1");
  }

  SUBCASE("dynamic attributes default to closed and off") {
    auto attr = [&](const std::string& o, const std::string& a) {
      return reg.query("check_obj_attr",
                       {Value::of(o), Value::of(a)}, s).as_bool();
    };
    // Static capabilities come from the class table.
    CHECK(attr("fridge", "openable"));
    CHECK(attr("faucet", "toggleable"));
    // The fridge is secretly open, but nothing in the log says so.
    s.state.find("fridge_1")->attrs.is_open = true;
    CHECK_FALSE(attr("fridge_1", "is_open"));
    // The agent's own actions update the memo.
    REQUIRE(s.issue(act(ActionKind::navigate, "fridge_1")).ok);
    REQUIRE(s.issue(act(ActionKind::close, "fridge_1")).ok);
    REQUIRE(s.issue(act(ActionKind::open, "fridge_1")).ok);
    CHECK(attr("fridge_1", "is_open"));
    REQUIRE(s.issue(act(ActionKind::close, "fridge_1")).ok);
    CHECK_FALSE(attr("fridge_1", "is_open"));
  }

  SUBCASE("event effects reach the attribute memo") {
    REQUIRE(s.issue(act(ActionKind::navigate, "table_1")).ok);
    REQUIRE(s.issue(act(ActionKind::pickup, "apple_1")).ok);
    REQUIRE(s.issue(act(ActionKind::navigate, "fridge_1")).ok);
    REQUIRE(s.issue(act(ActionKind::open, "fridge_1")).ok);
    REQUIRE(s.issue(act(ActionKind::put, "apple_1", "fridge_1")).ok);
    Value cold = reg.query("check_obj_attr",
                           {Value::of(std::string("apple_1")),
                            Value::of(std::string("is_cold"))}, s);
    CHECK(cold.as_bool());
  }

  SUBCASE("visual containment via masks") {
    REQUIRE(s.issue(act(ActionKind::navigate, "fridge_1")).ok);
    REQUIRE(s.issue(act(ActionKind::open, "fridge_1")).ok);
    auto rel = [&](const std::string& o, const std::string& r) {
      return reg.query("check_obj_recep_rel",
                       {Value::of(o), Value::of(r)}, s).as_str() == kRelInRecep;
    };
    CHECK(rel("mug", "fridge"));
    // Boxes carry no depth, so receptacles dead ahead of each other can
    // false-positive; that imperfection is what a learned checker fixes.
    // The table is outside the frustum entirely, so this pair is robust.
    CHECK_FALSE(rel("mug", "table"));
    CHECK_FALSE(rel("apple", "fridge"));  // not in view at all
  }
}

TEST_CASE("class-name grounding prefers untouched then nearest") {
  Fixture f;
  // A second mug, further away in the sink.
  ObjectInstance mug2 = make_obj("mug_2", "mug");
  mug2.location = {ObjectLocation::Kind::in_receptacle, {}, HeightBand::mid, "sink_1"};
  f.scene.objects["mug_2"] = mug2;
  f.scene.check_invariants();
  EnvSession s = f.session();
  CHECK(resolve_instance(s, Value::of(std::string("mug"))) == "mug_1");
  s.touched.insert("mug_1");
  CHECK(resolve_instance(s, Value::of(std::string("mug"))) == "mug_2");
  s.touched.insert("mug_2");  // all touched: fall back to distance again
  CHECK(resolve_instance(s, Value::of(std::string("mug"))) == "mug_1");
  CHECK(resolve_instance(s, Value::of(std::string("mug_2"))) == "mug_2");
  CHECK_FALSE(resolve_instance(s, Value::of(std::string("cd"))).has_value());
}

TEST_CASE("canonical form of the pickup program") {
  Fixture f;
  dsl::Program p = lib();

  SUBCASE("closed fridge expands to navigate/open/pickup/close") {
    auto c = canonicalize(p, {proc_call("udp_pickup_object",
                                        {Value::of(std::string("mug"))})},
                          f.scene, f.map);
    REQUIRE(c.outcome == Outcome::success);
    CHECK(described(c.atomics) ==
          std::vector<std::string>{"navigate(fridge_1)", "open(fridge_1)",
                                   "pickup(mug_1)", "close(fridge_1)"});
    for (bool ok : c.ok) CHECK(ok);
    CHECK(c.result == Value::of(true));
    CHECK_FALSE(c.final_state.empty());
  }

  SUBCASE("open container skips the door atomics") {
    f.scene.find("fridge_1")->attrs.is_open = true;
    auto c = canonicalize(p, {proc_call("udp_pickup_object",
                                        {Value::of(std::string("mug"))})},
                          f.scene, f.map);
    REQUIRE(c.outcome == Outcome::success);
    CHECK(described(c.atomics) ==
          std::vector<std::string>{"navigate(fridge_1)", "pickup(mug_1)"});
  }

  SUBCASE("non-openable receptacle needs no door handling") {
    auto c = canonicalize(p, {proc_call("udp_pickup_object",
                                        {Value::of(std::string("apple"))})},
                          f.scene, f.map);
    REQUIRE(c.outcome == Outcome::success);
    CHECK(described(c.atomics) ==
          std::vector<std::string>{"navigate(table_1)", "pickup(apple_1)"});
  }

  SUBCASE("pick and put composes both halves") {
    auto c = canonicalize(p, {proc_call("udp_pick_and_put_object",
                                        {Value::of(std::string("mug")),
                                         Value::of(std::string("sink"))})},
                          f.scene, f.map);
    REQUIRE(c.outcome == Outcome::success);
    CHECK(described(c.atomics) ==
          std::vector<std::string>{"navigate(fridge_1)", "open(fridge_1)",
                                   "pickup(mug_1)", "close(fridge_1)",
                                   "navigate(sink_1)", "put(mug_1,sink_1)"});
  }

  SUBCASE("canonicalization is deterministic") {
    ExecutableProcedure ae = {proc_call("udp_pick_and_put_object",
                                        {Value::of(std::string("mug")),
                                         Value::of(std::string("drawer"))})};
    auto a = canonicalize(p, ae, f.scene, f.map);
    auto b = canonicalize(p, ae, f.scene, f.map);
    CHECK(described(a.atomics) == described(b.atomics));
    CHECK(a.final_state == b.final_state);
    CHECK(a.ok == b.ok);
  }
}

TEST_CASE("canonical atomics replay to the same final state") {
  Fixture f;
  dsl::Program p = lib();
  ExecutableProcedure ae = {proc_call("udp_pick_and_put_object",
                                      {Value::of(std::string("egg")),
                                       Value::of(std::string("fridge"))})};
  auto c = canonicalize(p, ae, f.scene, f.map);
  REQUIRE(c.outcome == Outcome::success);

  EnvSession replay = f.session();
  for (size_t i = 0; i < c.atomics.size(); ++i) {
    StepResult r = replay.issue(c.atomics[i]);
    CHECK(r.ok == c.ok[i]);
  }
  CHECK(scene_dump(replay.state) == c.final_state);
  // The egg went through both doors and ended up cold.
  CHECK(replay.state.find("egg_1")->location.receptacle_id == "fridge_1");
  CHECK(replay.state.find("egg_1")->attrs.temperature == Temperature::cold);
}

TEST_CASE("emptying a receptacle fans out over its contents") {
  Fixture f;
  dsl::Program p = lib();
  EnvSession s = f.session();
  ExecutionTrace t = interpret(p, {proc_call("udp_empty_recep",
                                             {Value::of(std::string("table")),
                                              Value::of(std::string("sink"))})},
                               s, oracle_registry());
  REQUIRE(t.outcome == Outcome::success);
  int transfers = 0;
  for (const TraceEvent& e : t.events)
    if (e.kind == TraceEvent::Kind::proc_enter && e.name == "udp_pick_and_put_object")
      ++transfers;
  CHECK(transfers == 4);
  // Four objects, four pickup/put pairs.
  CHECK(t.atomics.size() == 16);
  for (bool ok : t.atomic_ok) CHECK(ok);
  CHECK(s.state.contents_of("table_1").empty());
  CHECK(s.state.contents_of("sink_1").size() == 4);
}

TEST_CASE("heuristic registry matches the oracle on a quiet scene") {
  Fixture f;
  dsl::Program p = lib();
  ExecutableProcedure ae = {proc_call("udp_pick_and_put_object",
                                      {Value::of(std::string("mug")),
                                       Value::of(std::string("microwave"))})};
  auto c = canonicalize(p, ae, f.scene, f.map);
  EnvSession s = f.session();
  ExecutionTrace t = interpret(p, ae, s, heuristic_registry());
  REQUIRE(t.outcome == Outcome::success);
  CHECK(described(t.atomics) == described(c.atomics));
}

TEST_CASE("grounding failures become logged failed actions") {
  Fixture f;
  dsl::Program p = lib();

  SUBCASE("no such class anywhere") {
    EnvSession s = f.session();
    ExecutionTrace t = interpret(p, {proc_call("udp_pickup_object",
                                               {Value::of(std::string("cd"))})},
                                 s, oracle_registry());
    CHECK(t.outcome == Outcome::failed_action);
    REQUIRE(!t.atomics.empty());
    CHECK_FALSE(t.atomic_ok.back());
    REQUIRE(!s.step_log.empty());
    CHECK(s.step_log.back().error_kind == ActionErrorKind::not_visible);
  }

  SUBCASE("the first failed atomic aborts the program") {
    // Fill the hand so the pickup fails mid-procedure.
    SceneState scene = f.scene;
    auto* plate = scene.find("plate_1");
    plate->location = {ObjectLocation::Kind::held, {}, HeightBand::mid, ""};
    scene.inventory = "plate_1";
    EnvSession s(scene, f.map);
    ExecutionTrace t = interpret(p, {proc_call("udp_pickup_object",
                                               {Value::of(std::string("mug"))})},
                                 s, oracle_registry());
    CHECK(t.outcome == Outcome::failed_action);
    // navigate, open succeeded; pickup failed; no close was attempted.
    CHECK(described(t.atomics) ==
          std::vector<std::string>{"navigate(fridge_1)", "open(fridge_1)",
                                   "pickup(mug_1)"});
    CHECK(t.atomic_ok == std::vector<bool>{true, true, false});
  }
}

TEST_CASE("interpreter faults and budgets") {
  Fixture f;
  dsl::Program p = lib();

  SUBCASE("unknown procedure is a runtime fault") {
    EnvSession s = f.session();
    ExecutionTrace t = interpret(p, {proc_call("udp_nonsense", {})},
                                 s, oracle_registry());
    CHECK(t.outcome == Outcome::runtime_fault);
    CHECK(t.fault.find("unknown procedure") != std::string::npos);
  }

  SUBCASE("non-bool condition is a runtime fault") {
    dsl::Program bad = dsl::parse_program(
        "proc udp_bad() { let x = 1; if x { atomic stop(); } return true; }");
    EnvSession s = f.session();
    ExecutionTrace t = interpret(bad, {proc_call("udp_bad", {})},
                                 s, oracle_registry());
    CHECK(t.outcome == Outcome::runtime_fault);
    CHECK(t.fault.find("condition is not a bool") != std::string::npos);
  }

  SUBCASE("reactor errors surface as faults, not crashes") {
    dsl::Program bad = dsl::parse_program(
        "proc udp_bad() {\n"
        "  let check = reactor \"check_obj_attr\";\n"
        "  let v = check(\"cd\", \"openable\");\n"
        "  return v;\n"
        "}");
    EnvSession s = f.session();
    ExecutionTrace t = interpret(bad, {proc_call("udp_bad", {})},
                                 s, oracle_registry());
    CHECK(t.outcome == Outcome::runtime_fault);
    CHECK(t.fault.find("check_obj_attr") != std::string::npos);
  }

  SUBCASE("an endless while loop hits the event cap") {
    dsl::Program spin = dsl::parse_program(
        "proc udp_spin() { let going = true; while going { let i = 1; } return true; }");
    EnvSession s = f.session();
    InterpLimits lim;
    lim.max_events = 500;
    ExecutionTrace t = interpret(spin, {proc_call("udp_spin", {})},
                                 s, oracle_registry(), lim);
    CHECK(t.outcome == Outcome::budget_exceeded);
    CHECK(static_cast<int>(t.events.size()) <= lim.max_events + 1);
  }

  SUBCASE("the atomic budget caps grid walks") {
    dsl::Program walk = dsl::parse_program(
        "proc udp_walk() {\n"
        "  for p in reachable_pos {\n"
        "    atomic navigate_pos(p.x, p.y);\n"
        "  }\n"
        "  return true;\n"
        "}");
    dsl::validate_or_throw(walk);
    EnvSession s = f.session();
    InterpLimits lim;
    lim.max_atomics = 5;
    ExecutionTrace t = interpret(walk, {proc_call("udp_walk", {})},
                                 s, oracle_registry(), lim);
    CHECK(t.outcome == Outcome::budget_exceeded);
    CHECK(t.atomics.size() == 5);
    for (bool ok : t.atomic_ok) CHECK(ok);
  }

  SUBCASE("runaway recursion trips the depth limit") {
    dsl::Program rec = dsl::parse_program(
        "proc udp_rec() { udp_rec(); return true; }");
    EnvSession s = f.session();
    ExecutionTrace t = interpret(rec, {proc_call("udp_rec", {})},
                                 s, oracle_registry());
    CHECK(t.outcome == Outcome::runtime_fault);
    CHECK(t.fault.find("depth") != std::string::npos);
  }
}

TEST_CASE("scene globals are bound for programs") {
  Fixture f;
  dsl::Program p = dsl::parse_program(
      "proc udp_probe() {\n"
      "  let check = reactor \"check_obj_attr\";\n"
      "  let v = check(fridge, \"openable\");\n"
      "  return v;\n"
      "}");
  dsl::validate_or_throw(p);
  EnvSession s = f.session();
  ExecutionTrace t = interpret(p, {proc_call("udp_probe", {})}, s, oracle_registry());
  REQUIRE(t.outcome == Outcome::success);
  CHECK(t.result == Value::of(true));

  // reachable_pos is near-to-far from the agent's start.
  dsl::Program q = dsl::parse_program(
      "proc udp_first() {\n"
      "  for p in reachable_pos {\n"
      "    return p;\n"
      "  }\n"
      "  return NONE;\n"
      "}");
  EnvSession s2 = f.session();
  ExecutionTrace t2 = interpret(q, {proc_call("udp_first", {})}, s2, oracle_registry());
  REQUIRE(t2.outcome == Outcome::success);
  REQUIRE(t2.result.is_pos());
  CHECK(t2.result.as_pos() == PosVal{2, 3});
}

TEST_CASE("executable procedures serialize and sign") {
  ExecutableProcedure ae = {
      proc_call("udp_pick_and_put_object",
                {Value::of(ObjRef{"mug_1", "mug"}), Value::of(std::string("sink"))}),
      {"navigate", {Value::of(std::string("fridge"))}, true},
  };
  CHECK(signature_of(ae) ==
        "udp_pick_and_put_object(mug,sink);atomic_navigate(fridge)");
  Json j = ae_to_json(ae);
  ExecutableProcedure back = ae_from_json(j);
  REQUIRE(back.size() == 2);
  CHECK(back[0].name == ae[0].name);
  CHECK(back[0].args[0] == ae[0].args[0]);
  CHECK(back[1].atomic);
  CHECK(ae_to_json(back).dump() == j.dump());
}

TEST_CASE("traces export as jsonl rows") {
  Fixture f;
  dsl::Program p = lib();
  EnvSession s = f.session();
  ExecutionTrace t = interpret(p, {proc_call("udp_pickup_object",
                                             {Value::of(std::string("mug"))})},
                               s, oracle_registry());
  std::vector<Json> rows = trace_to_jsonl(t);
  REQUIRE(!rows.empty());
  CHECK(rows[0].at("format") == "trace/1");
  CHECK(rows[0].at("outcome") == "success");
  CHECK(rows[0].at("atomics") == 4);
  bool saw_reactor = false, saw_atomic = false, saw_branch = false;
  for (size_t i = 1; i < rows.size(); ++i) {
    const std::string kind = rows[i].at("e");
    saw_reactor |= kind == "reactor";
    saw_atomic |= kind == "atomic";
    saw_branch |= kind == "branch";
  }
  CHECK(saw_reactor);
  CHECK(saw_atomic);
  CHECK(saw_branch);
  // Implicit mask queries from grounding are marked as such.
  bool saw_implicit = false;
  for (size_t i = 1; i < rows.size(); ++i)
    if (rows[i].at("e") == "reactor" && rows[i].contains("detail") &&
        rows[i]["detail"].contains("implicit"))
      saw_implicit = true;
  CHECK(saw_implicit);
}

TEST_CASE("values compare and serialize") {
  Value none = Value::none();
  Value b = Value::of(true);
  Value i = Value::of(int64_t{42});
  Value s = Value::of(std::string("mug"));
  Value o = Value::of(ObjRef{"mug_1", "mug"});
  Value pos = Value::of(PosVal{1, 2});
  Value list = Value::of(Value::List{b, i});

  CHECK(none == Value::none());
  CHECK(none != b);
  CHECK(i != s);  // type mismatch is unequal, not an error
  CHECK(o == Value::of(ObjRef{"mug_1", "cup"}));  // identity is the id
  CHECK(list == Value::of(Value::List{Value::of(true), Value::of(int64_t{42})}));
  CHECK(list != Value::of(Value::List{Value::of(true)}));

  for (const Value& v : {none, b, i, s, o, pos, list}) {
    Json j = value_to_json(v);
    CHECK(value_from_json(j) == v);
  }
  CHECK(value_to_json(o).at("obj") == "mug_1");
  CHECK(pos.show() == "(1,2)");
}
