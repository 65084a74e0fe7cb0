#include <algorithm>
#include <set>
#include <stdexcept>

#include "internal.hpp"
#include "pap/bench.hpp"
#include "pap/common.hpp"

namespace pap::bench {

namespace {

using interp::CallEntry;
using interp::Value;

const std::vector<TaskKind> kAllKinds = {
    TaskKind::iqa_existence,   TaskKind::iqa_count,      TaskKind::iqa_contain,
    TaskKind::hh_pick_place,   TaskKind::hh_pick_two_place,
    TaskKind::hh_clean_place,  TaskKind::hh_heat_place,  TaskKind::hh_cool_place,
    TaskKind::hh_slice_place,  TaskKind::hh_examine_light,
};

const char* kKindNames[] = {
    "iqa_existence", "iqa_count",      "iqa_contain",   "hh_pick_place",
    "hh_pick_two_place", "hh_clean_place", "hh_heat_place", "hh_cool_place",
    "hh_slice_place", "hh_examine_light",
};

// ---------------------------------------------------------------------------
// Object pools per task kind

const std::vector<std::string>& question_pool() {
  static const std::vector<std::string> p = {"mug",  "egg",  "apple", "potato",
                                             "tomato", "bread", "cd",   "book",
                                             "plate", "fork"};
  return p;
}

const std::vector<std::string>& pick_pool() {
  static const std::vector<std::string> p = {"mug", "egg",   "apple", "cd",
                                             "book", "plate", "fork"};
  return p;
}

const std::vector<std::string>& clean_pool() {
  static const std::vector<std::string> p = {"mug", "plate", "fork", "apple",
                                             "tomato"};
  return p;
}

const std::vector<std::string>& heat_pool() {
  static const std::vector<std::string> p = {"egg", "apple", "potato", "tomato",
                                             "bread"};
  return p;
}

const std::vector<std::string>& slice_pool() {
  static const std::vector<std::string> p = {"apple", "potato", "tomato",
                                             "bread"};
  return p;
}

const std::vector<std::string>& examine_pool() {
  static const std::vector<std::string> p = {"cd", "book", "mug", "plate"};
  return p;
}

// ---------------------------------------------------------------------------
// Surface templates. %O / %Os / %R expand to the object class, its plural,
// and the receptacle class. Train and eval-seen templates share phrasing
// style but never the exact string; eval-unseen templates are held out
// entirely, with a rare paraphrase on every fifth unseen task.

struct Tpl {
  const char* id;
  const char* text;
};

struct TplSet {
  Tpl train[2];
  Tpl seen[2];
  Tpl unseen[2];
  Tpl rare;  // {nullptr, nullptr} when the kind has no rare form
};

const TplSet kExistence = {
    {{"iqa.ex.t0", "is there a %O?"}, {"iqa.ex.t1", "can you find a %O?"}},
    {{"iqa.ex.s0", "is there a %O here?"},
     {"iqa.ex.s1", "can you find a %O in this room?"}},
    {{"iqa.ex.u0", "does this room have a %O?"},
     {"iqa.ex.u1", "is there a %O in this room?"}},
    {nullptr, nullptr}};

const TplSet kCount = {
    {{"iqa.ct.t0", "how many %Os are there?"}, {"iqa.ct.t1", "count the %Os."}},
    {{"iqa.ct.s0", "how many %Os are here?"}, {"iqa.ct.s1", "count the %Os now."}},
    {{"iqa.ct.u0", "what is the number of %Os?"},
     {"iqa.ct.u1", "how many %Os does this room have?"}},
    {nullptr, nullptr}};

const TplSet kContain = {
    {{"iqa.cn.t0", "is there a %O in the %R?"},
     {"iqa.cn.t1", "does the %R contain a %O?"}},
    {{"iqa.cn.s0", "is there a %O in the %R now?"},
     {"iqa.cn.s1", "is a %O in the %R?"}},
    {{"iqa.cn.u0", "did you see a %O in the %R?"},
     {"iqa.cn.u1", "do we have a %O in the %R?"}},
    {nullptr, nullptr}};

const TplSet kPick = {
    {{"hh.pick.t0", "put a %O in the %R."}, {"hh.pick.t1", "move a %O to the %R."}},
    {{"hh.pick.s0", "put one %O in the %R."},
     {"hh.pick.s1", "move the %O to the %R."}},
    {{"hh.pick.u0", "put a %O into the %R."},
     {"hh.pick.u1", "move a %O over to the %R."}},
    {"hh.pick.r0", "stow a %O in the %R."}};

const TplSet kTwo = {
    {{"hh.two.t0", "put two %Os in the %R."},
     {"hh.two.t1", "move two %Os to the %R."}},
    {{"hh.two.s0", "put two %Os in the %R now."},
     {"hh.two.s1", "move the two %Os to the %R."}},
    {{"hh.two.u0", "put two %Os into the %R."},
     {"hh.two.u1", "move two %Os over to the %R."}},
    {"hh.two.r0", "stow two %Os in the %R."}};

const TplSet kClean = {
    {{"hh.clean.t0", "put a rinsed %O in the %R."},
     {"hh.clean.t1", "rinse a %O and put it in the %R."}},
    {{"hh.clean.s0", "put one rinsed %O in the %R."},
     {"hh.clean.s1", "rinse the %O and put it in the %R."}},
    {{"hh.clean.u0", "put a rinsed %O into the %R."},
     {"hh.clean.u1", "rinse a %O and put it into the %R."}},
    {"hh.clean.r0", "soak a %O and put it in the %R."}};

const TplSet kHeat = {
    {{"hh.heat.t0", "put a heated %O in the %R."},
     {"hh.heat.t1", "heat a %O and put it in the %R."}},
    {{"hh.heat.s0", "put one heated %O in the %R."},
     {"hh.heat.s1", "heat the %O and put it in the %R."}},
    {{"hh.heat.u0", "put a heated %O into the %R."},
     {"hh.heat.u1", "heat a %O and put it into the %R."}},
    {"hh.heat.r0", "zap a %O and put it in the %R."}};

const TplSet kCool = {
    {{"hh.cool.t0", "put a chilled %O in the %R."},
     {"hh.cool.t1", "chill a %O and put it in the %R."}},
    {{"hh.cool.s0", "put one chilled %O in the %R."},
     {"hh.cool.s1", "chill the %O and put it in the %R."}},
    {{"hh.cool.u0", "put a chilled %O into the %R."},
     {"hh.cool.u1", "chill a %O and put it into the %R."}},
    {"hh.cool.r0", "frost a %O and put it in the %R."}};

const TplSet kSlice = {
    {{"hh.slice.t0", "put a slice of %O in the %R."},
     {"hh.slice.t1", "slice a %O and put it in the %R."}},
    {{"hh.slice.s0", "put one slice of %O in the %R."},
     {"hh.slice.s1", "slice the %O and put it in the %R."}},
    {{"hh.slice.u0", "put a slice of %O into the %R."},
     {"hh.slice.u1", "slice a %O and put it into the %R."}},
    {"hh.slice.r0", "carve a %O and put it in the %R."}};

const TplSet kSliceCooked = {
    {{"hh.slice_cooked.t0", "put a cooked slice of %O in the %R."},
     {"hh.slice_cooked.t1", "cook a slice of %O and put it in the %R."}},
    {{"hh.slice_cooked.s0", "put one cooked slice of %O in the %R."},
     {"hh.slice_cooked.s1", "cook the slice of %O and put it in the %R."}},
    {{"hh.slice_cooked.u0", "put a cooked slice of %O into the %R."},
     {"hh.slice_cooked.u1", "cook a slice of %O and put it into the %R."}},
    {nullptr, nullptr}};

const TplSet kSliceCold = {
    {{"hh.slice_cold.t0", "put a cold slice of %O in the %R."},
     {"hh.slice_cold.t1", "slice a %O and keep it cold in the %R."}},
    {{"hh.slice_cold.s0", "put one cold slice of %O in the %R."},
     {"hh.slice_cold.s1", "slice the %O and keep it cold in the %R."}},
    {{"hh.slice_cold.u0", "put a cold slice of %O into the %R."},
     {"hh.slice_cold.u1", "slice a %O and keep it cold inside the %R."}},
    {nullptr, nullptr}};

const TplSet kExamine = {
    {{"hh.exam.t0", "examine a %O under the lamp."},
     {"hh.exam.t1", "look at a %O under the lamp."}},
    {{"hh.exam.s0", "examine the %O under the lamp."},
     {"hh.exam.s1", "look at a %O by the lamp."}},
    {{"hh.exam.u0", "examine a %O in the lamp light."},
     {"hh.exam.u1", "look at the %O in the lamp light."}},
    {"hh.exam.r0", "inspect a %O under the lamp."}};

const TplSet& tpl_for(TaskKind kind, int slice_variant) {
  switch (kind) {
    case TaskKind::iqa_existence: return kExistence;
    case TaskKind::iqa_count: return kCount;
    case TaskKind::iqa_contain: return kContain;
    case TaskKind::hh_pick_place: return kPick;
    case TaskKind::hh_pick_two_place: return kTwo;
    case TaskKind::hh_clean_place: return kClean;
    case TaskKind::hh_heat_place: return kHeat;
    case TaskKind::hh_cool_place: return kCool;
    case TaskKind::hh_slice_place:
      return slice_variant == 1 ? kSliceCooked
                                : slice_variant == 2 ? kSliceCold : kSlice;
    case TaskKind::hh_examine_light: return kExamine;
  }
  throw std::logic_error("tpl_for: bad kind");
}

const Tpl& pick_tpl(const TplSet& ts, const std::string& profile, bool rare,
                    int which) {
  if (rare && ts.rare.id != nullptr) return ts.rare;
  const Tpl* arr = profile == "train" ? ts.train
                   : profile == "eval_seen" ? ts.seen
                                            : ts.unseen;
  return arr[which & 1];
}

std::string render(std::string text, const std::string& obj,
                   const std::string& recep) {
  auto sub = [&text](const std::string& from, const std::string& to) {
    size_t p = 0;
    while ((p = text.find(from, p)) != std::string::npos) {
      text.replace(p, from.size(), to);
      p += to.size();
    }
  };
  sub("%Os", planner::plural_of(obj));
  sub("%O", obj);
  sub("%R", recep);
  return text;
}

// ---------------------------------------------------------------------------
// Scene inspection helpers

std::vector<std::string> present_recep_classes(const SceneState& s) {
  std::set<std::string> seen;
  std::vector<std::string> out;
  for (const auto& [id, obj] : s.objects)
    if (class_info(obj.class_name).is_receptacle &&
        seen.insert(obj.class_name).second)
      out.push_back(obj.class_name);
  return out;
}

std::set<std::string> container_classes_of(const SceneState& s,
                                           const std::string& cls) {
  std::set<std::string> out;
  for (const auto& [id, obj] : s.objects) {
    if (obj.class_name != cls) continue;
    if (obj.location.kind != ObjectLocation::Kind::in_receptacle) continue;
    if (const ObjectInstance* r = s.find(obj.location.receptacle_id))
      out.insert(r->class_name);
  }
  return out;
}

CallEntry call(const std::string& name, std::vector<std::string> args,
               bool atomic = false) {
  CallEntry c{name, {}, atomic};
  for (std::string& a : args) c.args.push_back(Value::of(std::move(a)));
  return c;
}

// One generation attempt. Soft failures (scene constraints not met) return
// false so the caller can retry with the next derived seed.
bool try_build(const SuiteConfig& cfg, TaskKind kind, int i,
               const std::string& style, bool rare, uint64_t attempt_seed,
               TaskSpec* out) {
  Rng rng(attempt_seed);
  uint64_t scene_seed = mix_seed(attempt_seed, 0x5deece66dULL);

  SceneConfig sc;
  sc.force_closed = true;
  sc.style_id = style;

  TaskSpec t;
  t.kind = kind;
  t.scene_seed = scene_seed;
  t.split = cfg.profile == "eval_unseen" ? "unseen" : "seen";

  bool want_yes = i % 2 == 0;
  int k = 1 + i % 3;                          // count questions
  int variant = rare ? 0 : i % 3;             // slice task flavor
  int tpl_idx = i % 2;                        // household template slot

  std::string o;
  switch (kind) {
    case TaskKind::iqa_existence:
      tpl_idx = (i / 2) % 2;
      if (want_yes) {
        o = question_pool()[rng.index(question_pool().size())];
        sc.require_movables = {o};
      }
      break;
    case TaskKind::iqa_count:
      tpl_idx = (i / 3) % 2;
      o = question_pool()[rng.index(question_pool().size())];
      sc.require_movables.assign(static_cast<size_t>(k), o);
      break;
    case TaskKind::iqa_contain:
      tpl_idx = (i / 2) % 2;
      o = question_pool()[rng.index(question_pool().size())];
      sc.require_movables = {o};
      break;
    case TaskKind::hh_pick_place:
      o = pick_pool()[rng.index(pick_pool().size())];
      sc.require_movables = {o};
      break;
    case TaskKind::hh_pick_two_place:
      o = pick_pool()[rng.index(pick_pool().size())];
      sc.require_movables = {o, o};
      break;
    case TaskKind::hh_clean_place:
      o = clean_pool()[rng.index(clean_pool().size())];
      sc.require_movables = {o};
      sc.with_sink_and_faucet = true;
      break;
    case TaskKind::hh_heat_place:
      o = heat_pool()[rng.index(heat_pool().size())];
      sc.require_movables = {o};
      sc.with_microwave = true;
      break;
    case TaskKind::hh_cool_place:
      o = heat_pool()[rng.index(heat_pool().size())];
      sc.require_movables = {o};
      sc.with_fridge = true;
      break;
    case TaskKind::hh_slice_place:
      o = slice_pool()[rng.index(slice_pool().size())];
      sc.require_movables = {o};
      sc.with_knife = true;
      if (variant == 1) sc.with_microwave = true;
      if (variant == 2) sc.with_fridge = true;
      break;
    case TaskKind::hh_examine_light:
      o = examine_pool()[rng.index(examine_pool().size())];
      sc.require_movables = {o};
      sc.with_lamp = true;
      break;
  }

  SceneState scene;
  try {
    scene = generate_scene(sc, scene_seed);
  } catch (const std::runtime_error&) {
    return false;
  }

  std::string r;
  switch (kind) {
    case TaskKind::iqa_existence: {
      if (!want_yes) {
        std::set<std::string> present;
        for (const auto& [id, obj] : scene.objects) present.insert(obj.class_name);
        std::vector<std::string> absent;
        for (const std::string& c : question_pool())
          if (!present.count(c)) absent.push_back(c);
        if (absent.empty()) return false;
        o = absent[rng.index(absent.size())];
      }
      t.answer = want_yes ? "yes" : "no";
      break;
    }
    case TaskKind::iqa_count: {
      // The generator spreads required copies over distinct receptacles and
      // never duplicates a required class. Checked, not assumed: the count
      // answer is only sound when both hold.
      int found = 0;
      std::vector<std::string> containers;
      for (const auto& [id, obj] : scene.objects) {
        if (obj.class_name != o) continue;
        ++found;
        if (obj.location.kind != ObjectLocation::Kind::in_receptacle) return false;
        containers.push_back(obj.location.receptacle_id);
      }
      if (found != k) return false;
      std::sort(containers.begin(), containers.end());
      if (std::adjacent_find(containers.begin(), containers.end()) !=
          containers.end())
        return false;
      t.answer = std::to_string(k);
      break;
    }
    case TaskKind::iqa_contain: {
      std::set<std::string> with_o = container_classes_of(scene, o);
      if (want_yes) {
        if (with_o.empty()) return false;
        std::vector<std::string> v(with_o.begin(), with_o.end());
        r = v[rng.index(v.size())];
      } else {
        std::vector<std::string> cand;
        for (const std::string& c : present_recep_classes(scene))
          if (!with_o.count(c)) cand.push_back(c);
        if (cand.empty()) return false;
        r = cand[rng.index(cand.size())];
      }
      t.answer = want_yes ? "yes" : "no";
      break;
    }
    case TaskKind::hh_examine_light:
      break;  // no destination
    default: {
      // Destination: present receptacle class that neither already holds the
      // object (no pre-satisfied goals) nor undoes the task's state change
      // (a fridge would re-chill a heated object; the sink is the cleaning
      // site; the countertop is where the knife is returned).
      std::set<std::string> excl = container_classes_of(scene, o);
      if (kind == TaskKind::hh_clean_place) excl.insert("sink");
      if (kind == TaskKind::hh_heat_place || kind == TaskKind::hh_cool_place) {
        excl.insert("fridge");
        excl.insert("microwave");
      }
      if (kind == TaskKind::hh_slice_place) {
        excl.insert("countertop");
        excl.insert("fridge");
        excl.insert("microwave");
      }
      std::vector<std::string> cand;
      for (const std::string& c : present_recep_classes(scene))
        if (!excl.count(c)) cand.push_back(c);
      if (cand.empty()) return false;
      r = cand[rng.index(cand.size())];
      break;
    }
  }

  const Tpl& tpl = pick_tpl(tpl_for(kind, variant), cfg.profile, rare, tpl_idx);
  t.instruction = planner::make_instruction(render(tpl.text, o, r), tpl.id);
  t.obj_class = o;
  t.recep_class = r;
  t.scene = sc;

  switch (kind) {
    case TaskKind::iqa_existence:
    case TaskKind::iqa_count:
    case TaskKind::iqa_contain:
      t.gold = planner::rule_plan(t.instruction);
      break;
    case TaskKind::hh_pick_place:
      t.gold = {call("udp_pick_and_put_object", {o, r})};
      t.goals = {{"in", o, r, 1}};
      t.subgoals = {"Goto", "Pick", "Goto", "Put"};
      break;
    case TaskKind::hh_pick_two_place:
      t.gold = {call("udp_pick_and_put_object", {o, r}),
                call("udp_pick_and_put_object", {o, r})};
      t.goals = {{"in", o, r, 1}, {"in", o, r, 2}};
      t.subgoals = {"Goto", "Pick", "Goto", "Put", "Goto", "Pick", "Goto", "Put"};
      break;
    case TaskKind::hh_clean_place:
      t.gold = {call("udp_clean_object", {o}), call("udp_put_object", {o, r})};
      t.goals = {{"clean", o, "", 1}, {"clean_in", o, r, 1}};
      t.subgoals = {"Goto", "Pick", "Goto", "Clean", "Goto", "Put"};
      break;
    case TaskKind::hh_heat_place:
      t.gold = {call("udp_heat_object", {o}),
                call("udp_pick_and_put_object", {o, r})};
      t.goals = {{"hot", o, "", 1}, {"hot_in", o, r, 1}};
      t.subgoals = {"Goto", "Pick", "Goto", "Heat", "Goto", "Put"};
      break;
    case TaskKind::hh_cool_place:
      t.gold = {call("udp_cool_object", {o}),
                call("udp_pick_and_put_object", {o, r})};
      t.goals = {{"cold", o, "", 1}, {"cold_in", o, r, 1}};
      t.subgoals = {"Goto", "Pick", "Goto", "Cool", "Goto", "Put"};
      break;
    case TaskKind::hh_slice_place:
      if (variant == 1) {
        t.gold = {call("udp_slice_object", {o, "countertop"}),
                  call("udp_heat_object", {o}),
                  call("udp_pick_and_put_object", {o, r})};
        t.goals = {{"sliced", o, "", 1}, {"hot", o, "", 1}, {"hot_in", o, r, 1}};
        t.subgoals = {"Goto", "Slice", "Goto", "Pick",
                      "Goto", "Heat",  "Goto", "Put"};
      } else if (variant == 2) {
        t.gold = {call("udp_slice_object", {o, "countertop"}),
                  call("udp_cool_object", {o}),
                  call("udp_pick_and_put_object", {o, r})};
        t.goals = {{"sliced", o, "", 1},
                   {"cold", o, "", 1},
                   {"cold_in", o, r, 1}};
        t.subgoals = {"Goto", "Slice", "Goto", "Pick",
                      "Goto", "Cool",  "Goto", "Put"};
      } else {
        t.gold = {call("udp_slice_object", {o, "countertop"}),
                  call("udp_pick_and_put_object", {o, r})};
        t.goals = {{"sliced", o, "", 1}, {"sliced_in", o, r, 1}};
        t.subgoals = {"Goto", "Slice", "Goto", "Pick", "Goto", "Put"};
      }
      break;
    case TaskKind::hh_examine_light:
      t.gold = {call("udp_pick_object", {o}), call("navigate", {"lamp"}, true),
                call("toggle_on", {"lamp"}, true)};
      t.goals = {{"held", o, "", 1}, {"lamp_on", "lamp", "", 1}};
      t.subgoals = {"Goto", "Pick", "Goto", "Toggle"};
      break;
  }

  if (cfg.measure_gold && !verify_gold(t)) return false;
  *out = std::move(t);
  return true;
}

TaskSpec make_task(const SuiteConfig& cfg, TaskKind kind, int i) {
  size_t kind_idx = static_cast<size_t>(
      std::find(kAllKinds.begin(), kAllKinds.end(), kind) - kAllKinds.begin());
  uint64_t task_base =
      mix_seed(cfg.seed, (kind_idx + 1) * 1000003ULL + static_cast<uint64_t>(i));
  bool unseen = cfg.profile == "eval_unseen";
  static const char* kSeenStyles[4] = {"s0", "s1", "s2", "s3"};
  static const char* kUnseenStyles[4] = {"u0", "u1", "u2", "u3"};
  std::string style = (unseen ? kUnseenStyles : kSeenStyles)[i % 4];
  bool rare = unseen && i % 5 == 4;

  for (int attempt = 0; attempt < cfg.max_attempts; ++attempt) {
    TaskSpec t;
    if (try_build(cfg, kind, i, style, rare, mix_seed(task_base, attempt), &t)) {
      t.id = std::string(kind_name(kind)) + "/" + cfg.profile + "/" +
             std::to_string(i);
      return t;
    }
  }
  throw InfeasibleTask("no feasible task for " + std::string(kind_name(kind)) +
                       "/" + cfg.profile + "/" + std::to_string(i) + " within " +
                       std::to_string(cfg.max_attempts) + " attempts");
}

}  // namespace

// ---------------------------------------------------------------------------

const char* kind_name(TaskKind k) {
  return kKindNames[static_cast<size_t>(k)];
}

TaskKind kind_from_name(const std::string& s) {
  for (size_t i = 0; i < kAllKinds.size(); ++i)
    if (s == kKindNames[i]) return kAllKinds[i];
  throw std::invalid_argument("unknown task kind: " + s);
}

std::vector<TaskKind> all_kinds() { return kAllKinds; }

bool is_question(TaskKind k) {
  return k == TaskKind::iqa_existence || k == TaskKind::iqa_count ||
         k == TaskKind::iqa_contain;
}

SceneState scene_for(const TaskSpec& t) {
  return generate_scene(t.scene, t.scene_seed);
}

std::vector<TaskSpec> generate_suite(const SuiteConfig& cfg) {
  if (cfg.profile != "train" && cfg.profile != "eval_seen" &&
      cfg.profile != "eval_unseen")
    throw std::invalid_argument("generate_suite: unknown profile: " + cfg.profile);
  if (cfg.per_kind <= 0)
    throw std::invalid_argument("generate_suite: per_kind must be positive");
  std::vector<TaskKind> kinds = cfg.kinds.empty() ? all_kinds() : cfg.kinds;
  std::vector<TaskSpec> out;
  out.reserve(kinds.size() * static_cast<size_t>(cfg.per_kind));
  for (TaskKind k : kinds)
    for (int i = 0; i < cfg.per_kind; ++i) out.push_back(make_task(cfg, k, i));
  return out;
}

const dsl::Program& merged_program() {
  static const dsl::Program merged = [] {
    LibraryBundle manip = load_builtin("alfred/v1");
    LibraryBundle questions = load_builtin("iqa/v1");
    dsl::Program m = dsl::clone(manip.program);
    std::set<std::string> names;
    for (const dsl::Procedure& p : m.procs) names.insert(p.name);
    for (const dsl::Procedure& p : questions.program.procs) {
      if (!names.insert(p.name).second)
        throw std::runtime_error("merged_program: duplicate procedure: " + p.name);
      m.procs.push_back(dsl::clone(p));
    }
    return m;
  }();
  return merged;
}

std::vector<std::string> hidden_from_start(const SceneState& scene) {
  SceneState probe = scene;
  std::vector<std::string> out;
  for (const auto& [id, obj] : scene.objects) {
    const ClassInfo& info = class_info(obj.class_name);
    if (!info.is_receptacle && !info.is_fixture) continue;
    bool seen = false;
    for (int rot = 0; rot < 360 && !seen; rot += 90)
      for (int hor : {-30, 0, 30}) {
        probe.agent = {scene.agent.cell, rot, hor};
        if (visible(probe, id)) {
          seen = true;
          break;
        }
      }
    if (!seen) out.push_back(id);
  }
  return out;
}

std::vector<std::string> split_hygiene_violations(const std::vector<TaskSpec>& a,
                                                  const std::vector<TaskSpec>& b) {
  std::set<std::string> msgs;
  std::set<std::string> texts_a;
  for (const TaskSpec& t : a) texts_a.insert(t.instruction.text);
  for (const TaskSpec& t : b)
    if (texts_a.count(t.instruction.text))
      msgs.insert("verbatim instruction in both suites: " + t.instruction.text);

  std::map<std::string, std::set<std::string>> styles_a;  // split -> styles
  for (const TaskSpec& t : a) styles_a[t.split].insert(t.scene.style_id);
  for (const TaskSpec& t : b)
    for (const auto& [split, styles] : styles_a)
      if (split != t.split && styles.count(t.scene.style_id))
        msgs.insert("style " + t.scene.style_id + " crosses the " + split +
                    "/" + t.split + " boundary");
  return {msgs.begin(), msgs.end()};
}

std::string answer_token_for(TaskKind kind, const std::string& answer) {
  if (kind == TaskKind::iqa_count) {
    for (size_t i = 0; i < baseline::kAnswerTokens.size(); ++i)
      if (answer == std::to_string(i + 1)) return baseline::kAnswerTokens[i];
    throw std::invalid_argument("answer_token_for: bad count: " + answer);
  }
  if (is_question(kind)) {
    if (answer == "yes") return baseline::kAnswerTokens[0];
    if (answer == "no") return baseline::kAnswerTokens[1];
    throw std::invalid_argument("answer_token_for: bad answer: " + answer);
  }
  throw std::invalid_argument("answer_token_for: not a question kind");
}

std::string semantic_answer(TaskKind kind, const std::string& token) {
  for (size_t i = 0; i < baseline::kAnswerTokens.size(); ++i) {
    if (token != baseline::kAnswerTokens[i]) continue;
    if (kind == TaskKind::iqa_count) return std::to_string(i + 1);
    if (i == 0) return "yes";
    if (i == 1) return "no";
    return "";  // third token has no yes/no meaning
  }
  return "";
}

Json task_to_json(const TaskSpec& t) {
  Json j;
  j["format"] = "task/1";
  j["id"] = t.id;
  j["kind"] = kind_name(t.kind);
  j["text"] = t.instruction.text;
  j["template_id"] = t.instruction.template_id;
  j["scene_seed"] = t.scene_seed;
  j["scene"] = scene_config_to_json(t.scene);
  j["split"] = t.split;
  j["answer"] = t.answer;
  Json goals = Json::array();
  for (const GoalCond& g : t.goals)
    goals.push_back(Json{{"pred", g.pred}, {"obj", g.obj}, {"arg", g.arg},
                         {"count", g.count}});
  j["goals"] = goals;
  j["gold"] = interp::ae_to_json(t.gold);
  j["subgoals"] = t.subgoals;
  j["obj_class"] = t.obj_class;
  j["recep_class"] = t.recep_class;
  j["gold_len"] = t.gold_len;
  return j;
}

TaskSpec task_from_json(const Json& j) {
  if (j.value("format", "") != "task/1")
    throw std::invalid_argument("task_from_json: not a task/1 record");
  TaskSpec t;
  t.id = j.at("id");
  t.kind = kind_from_name(j.at("kind"));
  t.instruction = planner::make_instruction(j.at("text"), j.at("template_id"));
  t.scene_seed = j.at("scene_seed");
  t.scene = scene_config_from_json(j.at("scene"));
  t.split = j.at("split");
  t.answer = j.at("answer");
  for (const Json& g : j.at("goals"))
    t.goals.push_back(
        {g.at("pred"), g.at("obj"), g.at("arg"), g.at("count")});
  t.gold = interp::ae_from_json(j.at("gold"));
  t.subgoals = j.at("subgoals").get<std::vector<std::string>>();
  t.obj_class = j.at("obj_class");
  t.recep_class = j.at("recep_class");
  t.gold_len = j.at("gold_len");
  return t;
}

}  // namespace pap::bench
