#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <memory>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "pap/baseline.hpp"
#include "pap/interp/interpreter.hpp"
#include "pap/library.hpp"
#include "pap/scene_gen.hpp"

using namespace pap;
using namespace pap::baseline;
using interp::CallEntry;
using interp::CanonicalForm;
using interp::Value;

namespace {

Value sv(const std::string& s) { return Value::of(s); }

CallEntry call1(const std::string& name, const std::string& a) {
  return {name, {sv(a)}, false};
}
CallEntry call2(const std::string& name, const std::string& a,
                const std::string& b) {
  return {name, {sv(a), sv(b)}, false};
}

struct Fix {
  SceneState scene;
  std::shared_ptr<const PresearchMap> map;
  explicit Fix(SceneState s)
      : scene(std::move(s)),
        map(std::make_shared<const PresearchMap>(build_presearch_map(scene))) {}
};

std::vector<AtomicAction> canon(const LibraryBundle& lib, const CallEntry& c,
                                const Fix& fx) {
  CanonicalForm cf = interp::canonicalize(lib.program, {c}, fx.scene, fx.map);
  REQUIRE(cf.outcome == interp::Outcome::success);
  return cf.atomics;
}

bool has_tag(const std::vector<std::string>& seen, const std::string& tag) {
  return std::find(seen.begin(), seen.end(), tag) != seen.end();
}

}  // namespace

TEST_CASE("candidate lists run near to far") {
  Fix fx(pap_test::tiny_scene());

  std::vector<std::string> receps = ordered_candidates(fx.scene, *fx.map, false);
  std::set<std::string> expect;
  for (const auto& [id, pose] : fx.map->receptacle_pose) expect.insert(id);
  CHECK(std::set<std::string>(receps.begin(), receps.end()) == expect);
  for (size_t i = 1; i < receps.size(); ++i)
    CHECK(first_visible_rank(fx.scene, *fx.map, receps[i - 1]) <=
          first_visible_rank(fx.scene, *fx.map, receps[i]));

  std::vector<std::string> all = ordered_candidates(fx.scene, *fx.map, true);
  CHECK(all.size() == receps.size() + fx.map->movable.size());
  for (const auto& [id, entry] : fx.map->movable)
    CHECK(std::find(all.begin(), all.end(), id) != all.end());
  CHECK(ordered_candidates(fx.scene, *fx.map, true) == all);

  // A movable hidden in a closed receptacle sits right after its container.
  auto pos = [&](const std::string& id) {
    return std::find(all.begin(), all.end(), id) - all.begin();
  };
  CHECK(pos("mug_1") > pos("fridge_1"));
}

TEST_CASE("the question skeleton keeps receptacle-level actions only") {
  using pap_test::act;
  std::vector<AtomicAction> mixed = {
      act(ActionKind::navigate_pos), act(ActionKind::rotate_to),
      act(ActionKind::navigate, "fridge_1"), act(ActionKind::open, "fridge_1"),
      act(ActionKind::look_to), act(ActionKind::close, "fridge_1"),
      act(ActionKind::pickup, "mug_1")};
  std::vector<AtomicAction> sk = iqa_skeleton(mixed);
  REQUIRE(sk.size() == 3);
  CHECK(describe(sk[0]) == "navigate(fridge_1)");
  CHECK(describe(sk[1]) == "open(fridge_1)");
  CHECK(describe(sk[2]) == "close(fridge_1)");
}

TEST_CASE("gold annotation replays the trace and records views") {
  Fix fx(pap_test::tiny_scene());
  LibraryBundle alfred = load_builtin("alfred/v1");
  std::vector<AtomicAction> atomics =
      canon(alfred, call1("udp_pick_object", "mug"), fx);
  REQUIRE(atomics.size() == 4);

  std::vector<ReactiveStep> gold = annotate_gold(atomics, fx.scene, fx.map);
  REQUIRE(gold.size() == 4);
  CHECK(gold[0].action == "navigate");
  CHECK(gold[0].args == std::vector<std::string>{"mug_1"});
  CHECK(gold[1].action == "open");
  CHECK(gold[1].args == std::vector<std::string>{"fridge_1"});
  CHECK(gold[2].action == "pickup");
  CHECK(gold[3].action == "close");

  // Before the open the mug is hidden; after it, visible; once held, gone.
  CHECK(has_tag(gold[1].seen, "fridge/fridge_1"));
  CHECK(!has_tag(gold[1].seen, "mug/mug_1"));
  CHECK(has_tag(gold[2].seen, "mug/mug_1"));
  CHECK(!has_tag(gold[3].seen, "mug/mug_1"));

  std::vector<ReactiveStep> with_ans =
      annotate_gold(atomics, fx.scene, fx.map, {}, kAnswerTokens[0]);
  REQUIRE(with_ans.size() == 5);
  CHECK(with_ans.back().action == "<ans_1>");
  CHECK(with_ans.back().args.empty());

  // A broken trace is not gold: the mug is hidden in the closed fridge.
  CHECK_THROWS_AS(
      annotate_gold({pap_test::act(ActionKind::pickup, "mug_1")}, fx.scene, fx.map),
      std::runtime_error);
  // Scan micro-actions must be projected out first.
  CHECK_THROWS_AS(
      annotate_gold({pap_test::act(ActionKind::navigate_pos)}, fx.scene, fx.map),
      std::invalid_argument);
}

TEST_CASE("a single episode is memorized and replayed exactly") {
  Fix fx(pap_test::tiny_scene());
  LibraryBundle alfred = load_builtin("alfred/v1");
  std::vector<AtomicAction> atomics =
      canon(alfred, call2("udp_pick_and_put_object", "mug", "sink"), fx);

  ReactiveEpisode ep{planner::make_instruction("put a mug in the sink"),
                     ordered_candidates(fx.scene, *fx.map, true),
                     annotate_gold(atomics, fx.scene, fx.map)};
  ReactiveModel m = train_reactive({ep});

  interp::EnvSession env(fx.scene, fx.map);
  RunResult r = run_reactive(m, ep.instruction, env, ep.candidates, m.max_steps);
  CHECK(r.stopped);
  CHECK(r.invalid == 0);
  CHECK(r.answer.empty());
  REQUIRE(r.steps.size() == ep.gold.size());
  for (size_t i = 0; i < ep.gold.size(); ++i) {
    CAPTURE(i);
    CHECK(r.steps[i].step.action == ep.gold[i].action);
    CHECK(r.steps[i].step.args == ep.gold[i].args);
    CHECK(r.steps[i].ok);
  }
  CHECK(env.state.find("mug_1")->location.receptacle_id == "sink_1");

  interp::EnvSession env2(fx.scene, fx.map);
  RunResult r2 = run_reactive(m, ep.instruction, env2, ep.candidates, m.max_steps);
  CHECK(r2.steps.size() == r.steps.size());

  SUBCASE("budget zero gives an empty run") {
    interp::EnvSession env3(fx.scene, fx.map);
    RunResult r3 = run_reactive(m, ep.instruction, env3, ep.candidates, 0);
    CHECK(r3.steps.empty());
    CHECK(r3.answer.empty());
    CHECK(!r3.stopped);
  }
}

namespace {

struct QuestionEp {
  ReactiveEpisode ep;
  std::string gold_answer;
  SceneState scene;
  std::shared_ptr<const PresearchMap> map;
};

// Existence and counting questions over generated scenes, gold answers from
// the oracle rollout of the question library.
std::vector<QuestionEp> question_corpus(const LibraryBundle& iqa) {
  std::vector<QuestionEp> out;
  SceneConfig cfg;
  cfg.force_closed = true;

  auto add = [&](const Fix& fx, const std::string& text, const CallEntry& c,
                 const std::string& token) {
    CanonicalForm cf = interp::canonicalize(iqa.program, {c}, fx.scene, fx.map);
    REQUIRE(cf.outcome == interp::Outcome::success);
    std::vector<ReactiveStep> gold =
        annotate_gold(iqa_skeleton(cf.atomics), fx.scene, fx.map, {}, token);
    out.push_back({{planner::make_instruction(text),
                    ordered_candidates(fx.scene, *fx.map, false), gold},
                   token, fx.scene, fx.map});
  };

  const std::vector<std::string> pool = {"mug",  "egg",  "apple", "cd",
                                         "book", "fork", "plate", "tomato"};
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    Fix fx(generate_scene(cfg, seed));
    std::set<std::string> classes;
    for (const auto& [id, obj] : fx.scene.objects)
      if (obj.attrs.pickupable) classes.insert(obj.class_name);
    REQUIRE(!classes.empty());
    std::string present = *classes.begin(), absent;
    for (const std::string& c : pool)
      if (absent.empty() && !classes.count(c)) absent = c;
    REQUIRE(!absent.empty());

    CanonicalForm yes = interp::canonicalize(
        iqa.program, {call1("udp_check_obj_exist", present)}, fx.scene, fx.map);
    REQUIRE(yes.result.as_bool());
    add(fx, "is there a " + present + "?", call1("udp_check_obj_exist", present),
        kAnswerTokens[0]);
    add(fx, "is there a " + absent + "?", call1("udp_check_obj_exist", absent),
        kAnswerTokens[1]);
  }
  for (uint64_t seed = 21; seed <= 23; ++seed) {
    SceneConfig twice = cfg;
    twice.require_movables = {"mug", "mug"};
    Fix fx(generate_scene(twice, seed));
    CanonicalForm cf = interp::canonicalize(
        iqa.program, {call1("udp_count_obj", "mug")}, fx.scene, fx.map);
    REQUIRE(cf.result.as_int() == 2);
    add(fx, "how many mugs are there?", call1("udp_count_obj", "mug"),
        kAnswerTokens[1]);

    SceneConfig once = cfg;
    once.require_movables = {"egg"};
    Fix fy(generate_scene(once, seed + 40));
    CanonicalForm cg = interp::canonicalize(
        iqa.program, {call1("udp_count_obj", "egg")}, fy.scene, fy.map);
    REQUIRE(cg.result.as_int() == 1);
    add(fy, "how many eggs are there?", call1("udp_count_obj", "egg"),
        kAnswerTokens[0]);
  }
  return out;
}

}  // namespace

TEST_CASE("question corpus: seen-split answers are well above chance") {
  LibraryBundle iqa = load_builtin("iqa/v1");
  std::vector<QuestionEp> corpus = question_corpus(iqa);
  std::vector<ReactiveEpisode> eps;
  for (const QuestionEp& q : corpus) eps.push_back(q.ep);
  ReactiveModel m = train_reactive(eps);

  int correct = 0;
  int navigated_in_order = 0;
  for (const QuestionEp& q : corpus) {
    interp::EnvSession env(q.scene, q.map);
    RunResult r =
        run_reactive(m, q.ep.instruction, env, q.ep.candidates, m.max_steps);
    if (r.answer == q.gold_answer) ++correct;

    std::vector<size_t> nav_rank;
    bool monotone = true;
    for (const DecodedStep& d : r.steps)
      if (d.step.action == "navigate" && !d.step.args.empty()) {
        auto it = std::find(q.ep.candidates.begin(), q.ep.candidates.end(),
                            d.step.args[0]);
        size_t rank = static_cast<size_t>(it - q.ep.candidates.begin());
        if (!nav_rank.empty() && rank <= nav_rank.back()) monotone = false;
        nav_rank.push_back(rank);
      }
    if (monotone && nav_rank.size() >= 2) ++navigated_in_order;
  }

  double acc = static_cast<double>(correct) / corpus.size();
  CAPTURE(acc);
  CHECK(acc >= 0.75);  // 3-way output space, chance ~0.33
  // Receptacle sweeps should mostly visit candidates near-to-far.
  CHECK(navigated_in_order >= static_cast<int>(corpus.size() / 2));
}

TEST_CASE("pointer decode stays in range over 10k fuzz steps") {
  Fix fx(pap_test::tiny_scene());
  LibraryBundle alfred = load_builtin("alfred/v1");

  std::vector<ReactiveEpisode> eps;
  std::vector<std::string> cands = ordered_candidates(fx.scene, *fx.map, true);
  auto add = [&](const std::string& text, const CallEntry& c) {
    eps.push_back({planner::make_instruction(text), cands,
                   annotate_gold(canon(alfred, c, fx), fx.scene, fx.map)});
  };
  add("put a mug in the sink", call2("udp_pick_and_put_object", "mug", "sink"));
  add("put an egg in the fridge", call2("udp_pick_and_put_object", "egg", "fridge"));
  add("pick up the apple", call1("udp_pick_object", "apple"));
  ReactiveModel m = train_reactive(eps);

  std::mt19937_64 rng(11);
  const std::vector<std::string> pool = {
      "put",  "take", "grab",   "a",    "the",  "in",   "on",     "mug",
      "egg",  "sink", "fridge", "lamp", "zap",  "blue", "around", "apple",
      "warm", "cold", "xyzzy",  "move", "drop", "two"};
  std::set<std::string> cand_set;
  size_t total_steps = 0;
  int runs = 0;
  while (total_steps < 10000 && runs < 4000) {
    ++runs;
    std::string text;
    int len = 2 + static_cast<int>(rng() % 9);
    for (int k = 0; k < len; ++k)
      text += pool[rng() % pool.size()] + (k + 1 < len ? " " : "");

    std::vector<std::string> sub = cands;
    std::shuffle(sub.begin(), sub.end(), rng);
    sub.resize(1 + rng() % sub.size());
    cand_set = std::set<std::string>(sub.begin(), sub.end());

    interp::EnvSession env(fx.scene, fx.map);
    RunResult r =
        run_reactive(m, planner::make_instruction(text), env, sub, 48);
    total_steps += r.steps.size() + 1;
    for (const DecodedStep& d : r.steps)
      for (const std::string& arg : d.step.args)
        if (!arg.empty() && d.step.action != "put")
          CHECK(cand_set.count(arg) == 1);
    if (!r.steps.empty()) {
      // put's first argument is the held object, not a pointer choice.
      for (const DecodedStep& d : r.steps)
        if (d.step.action == "put" && d.step.args.size() == 2 &&
            !d.step.args[1].empty())
          CHECK(cand_set.count(d.step.args[1]) == 1);
    }
  }
  CHECK(total_steps >= 10000);
}

TEST_CASE("models and episodes survive serialization") {
  Fix fx(pap_test::tiny_scene());
  LibraryBundle alfred = load_builtin("alfred/v1");
  ReactiveEpisode ep{
      planner::make_instruction("put a mug in the sink"),
      ordered_candidates(fx.scene, *fx.map, true),
      annotate_gold(canon(alfred, call2("udp_pick_and_put_object", "mug", "sink"), fx),
                    fx.scene, fx.map)};
  ReactiveModel m = train_reactive({ep});

  ReactiveModel back = ReactiveModel::from_json(m.to_json());
  CHECK(back.to_json() == m.to_json());
  interp::EnvSession e1(fx.scene, fx.map), e2(fx.scene, fx.map);
  RunResult r1 = run_reactive(m, ep.instruction, e1, ep.candidates, m.max_steps);
  RunResult r2 =
      run_reactive(back, ep.instruction, e2, ep.candidates, back.max_steps);
  REQUIRE(r1.steps.size() == r2.steps.size());
  for (size_t i = 0; i < r1.steps.size(); ++i) {
    CHECK(r1.steps[i].step.action == r2.steps[i].step.action);
    CHECK(r1.steps[i].step.args == r2.steps[i].step.args);
  }

  ReactiveEpisode round = episode_from_json(episode_to_json(ep));
  CHECK(round.instruction.text == ep.instruction.text);
  CHECK(round.candidates == ep.candidates);
  REQUIRE(round.gold.size() == ep.gold.size());
  CHECK(round.gold.back().seen == ep.gold.back().seen);

  CHECK_THROWS_AS(ReactiveModel::from_json(Json{{"format", "bogus"}}),
                  std::invalid_argument);
}

TEST_CASE("malformed corpora are rejected") {
  CHECK_THROWS_AS(train_reactive({}), std::invalid_argument);

  planner::Instruction q = planner::make_instruction("do something");
  ReactiveEpisode missing{q, {"sink_1"}, {{"navigate", {"mug_1"}, {}}}};
  CHECK_THROWS_AS(train_reactive({missing}), std::invalid_argument);

  ReactiveEpisode bad_put{q, {"sink_1"}, {{"put", {"sink_1"}, {}}}};
  CHECK_THROWS_AS(train_reactive({bad_put}), std::invalid_argument);

  ReactiveEpisode a{q, {"sink_1"}, {{"navigate", {"sink_1"}, {}}}};
  ReactiveEpisode b{q, {"sink_1"}, {{"navigate", {}, {}}}};
  CHECK_THROWS_AS(train_reactive({a, b}), std::invalid_argument);

  ReactiveEpisode mid_answer{
      q, {"sink_1"}, {{"<ans_1>", {}, {}}, {"navigate", {"sink_1"}, {}}}};
  CHECK_THROWS_AS(train_reactive({mid_answer}), std::invalid_argument);
}
