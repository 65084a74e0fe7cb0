#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <set>
#include <string>
#include <vector>

#include "pap/planner.hpp"

using namespace pap;
using namespace pap::planner;
using interp::CallEntry;
using interp::ExecutableProcedure;
using interp::Value;

namespace {

Value sv(const std::string& s) { return Value::of(s); }

CallEntry call(const std::string& name, std::vector<std::string> args,
               bool atomic = false) {
  CallEntry c{name, {}, atomic};
  for (std::string& a : args) c.args.push_back(sv(std::move(a)));
  return c;
}

std::string show(const ExecutableProcedure& ae) { return interp::signature_of(ae); }

// Small household corpus: one template family per task flavor.
std::vector<PlannerPair> hh_corpus() {
  std::vector<PlannerPair> out;
  auto add = [&](const std::string& text, ExecutableProcedure gold) {
    out.emplace_back(make_instruction(text), std::move(gold));
  };
  const std::vector<std::pair<std::string, std::string>> combos = {
      {"egg", "cabinet"}, {"mug", "fridge"},  {"cd", "drawer"},
      {"apple", "safe"},  {"bread", "sink"},  {"potato", "cabinet"},
      {"mug", "sink"},    {"egg", "drawer"},  {"cd", "safe"},
      {"apple", "fridge"}};
  for (const auto& [obj, recep] : combos) {
    add("put a " + obj + " in the " + recep,
        {call("udp_pick_and_put_object", {obj, recep})});
    add("put two " + plural_of(obj) + " in the " + recep,
        {call("udp_pick_and_put_object", {obj, recep}),
         call("udp_pick_and_put_object", {obj, recep})});
    add("put " + plural_of(obj) + " in a " + recep,
        {call("udp_pick_and_put_object", {obj, recep}),
         call("udp_pick_and_put_object", {obj, recep})});
    add("put a chilled " + obj + " in the " + recep,
        {call("udp_cool_object", {obj}),
         call("udp_pick_and_put_object", {obj, recep})});
    add("put a heated " + obj + " in the " + recep,
        {call("udp_heat_object", {obj}),
         call("udp_pick_and_put_object", {obj, recep})});
    add("put a rinsed " + obj + " in the " + recep,
        {call("udp_clean_object", {obj}), call("udp_put_object", {obj, recep})});
    add("put a slice of " + obj + " in the " + recep,
        {call("udp_slice_object", {obj, "countertop"}),
         call("udp_pick_and_put_object", {obj, recep})});
    add("place a cooked " + obj + " slice in the " + recep,
        {call("udp_slice_object", {obj, "countertop"}),
         call("udp_heat_object", {obj}),
         call("udp_pick_and_put_object", {obj, recep})});
    add("examine a " + obj + " under the lamp",
        {call("udp_pick_object", {obj}), call("navigate", {"lamp"}, true),
         call("toggle_on", {"lamp"}, true)});
  }
  return out;
}

}  // namespace

TEST_CASE("tokenization is deterministic and splits punctuation") {
  Instruction q = make_instruction("Is there a Mug?");
  CHECK(q.tokens == std::vector<std::string>{"is", "there", "a", "mug", "?"});
  CHECK(make_instruction("Is there a Mug?").tokens == q.tokens);
  CHECK(tokenize("count the mugs.") ==
        std::vector<std::string>{"count", "the", "mugs", "."});
  CHECK(tokenize("well,done") == std::vector<std::string>{"well", ",", "done"});
}

TEST_CASE("singular and plural forms invert each other") {
  for (const std::string cls : {"mug", "knife", "potato", "cd", "bread", "egg"}) {
    CAPTURE(cls);
    CHECK(singular_of(plural_of(cls)) == cls);
  }
  CHECK(plural_of("knife") == "knives");
  CHECK(plural_of("potato") == "potatoes");
  CHECK(singular_of("mugs") == "mug");
}

TEST_CASE("the rule planner covers the three question families") {
  CHECK(show(rule_plan(make_instruction("Is there a mug?"))) ==
        "udp_check_obj_exist(mug)");
  CHECK(show(rule_plan(make_instruction("How many mugs are there?"))) ==
        "udp_count_obj(mug)");
  CHECK(show(rule_plan(make_instruction("Is there a mug in the fridge?"))) ==
        "udp_check_contain(mug,fridge)");

  // Surface variants from the question grammar.
  CHECK(show(rule_plan(make_instruction("can you find an egg?"))) ==
        "udp_check_obj_exist(egg)");
  CHECK(show(rule_plan(make_instruction("does this room have a laptop?"))) ==
        "udp_check_obj_exist(laptop)");
  CHECK(show(rule_plan(make_instruction("is there an apple in this room?"))) ==
        "udp_check_obj_exist(apple)");
  CHECK(show(rule_plan(make_instruction("what is the number of knives?"))) ==
        "udp_count_obj(knife)");
  CHECK(show(rule_plan(make_instruction("count the potatoes."))) ==
        "udp_count_obj(potato)");
  CHECK(show(rule_plan(make_instruction("does the fridge contain an egg?"))) ==
        "udp_check_contain(egg,fridge)");
  CHECK(show(rule_plan(make_instruction("is an apple in the sink?"))) ==
        "udp_check_contain(apple,sink)");
  CHECK(show(rule_plan(make_instruction("did you see a cd in the safe?"))) ==
        "udp_check_contain(cd,safe)");

  CHECK_THROWS_AS(rule_plan(make_instruction("please dance")),
                  std::invalid_argument);
  CHECK_THROWS_AS(rule_plan(make_instruction("is there a unicorn?")),
                  std::invalid_argument);
}

TEST_CASE("subgoal sequences map to call patterns") {
  using V = std::vector<std::string>;
  CHECK(induce_planner_labels({"Goto", "Pick", "Clean", "Goto", "Put"}) ==
        V{"udp_clean_object", "udp_put_object"});
  // A different ordering annotates the same pattern.
  CHECK(induce_planner_labels({"Goto", "Pickup", "Goto", "Clean", "Put"}) ==
        V{"udp_clean_object", "udp_put_object"});
  CHECK(induce_planner_labels({"Goto", "Pick", "Goto", "Put"}) ==
        V{"udp_pick_and_put_object"});
  CHECK(induce_planner_labels(
            {"Goto", "Slice", "Goto", "Pick", "Goto", "Heat", "Goto", "Put"}) ==
        V{"udp_slice_object", "udp_heat_object", "udp_pick_and_put_object"});
  CHECK(induce_planner_labels({"Goto", "Pick", "Goto", "Toggle"}) ==
        V{"udp_pick_object", "navigate", "toggle_on"});
  CHECK_THROWS_AS(induce_planner_labels({}), std::invalid_argument);
  CHECK_THROWS_AS(induce_planner_labels({"Goto", "Fly"}), std::invalid_argument);
  CHECK_THROWS_AS(induce_planner_labels({"Pick"}), std::invalid_argument);
}

TEST_CASE("the learned planner memorizes and generalizes") {
  std::vector<PlannerPair> corpus = hh_corpus();
  PlannerModel m = train_planner(corpus);

  SUBCASE("training pairs decode exactly") {
    for (const auto& [q, gold] : corpus) {
      CAPTURE(q.text);
      CHECK(show(plan(m, q)) == show(gold));
    }
  }

  SUBCASE("held-out object and receptacle pairings decode to their plans") {
    CHECK(show(plan(m, make_instruction("put a chilled egg in the sink"))) ==
          "udp_cool_object(egg);udp_pick_and_put_object(egg,sink)");
    CHECK(show(plan(m, make_instruction("put cds in a safe"))) ==
          "udp_pick_and_put_object(cd,safe);udp_pick_and_put_object(cd,safe)");
    CHECK(show(plan(m, make_instruction("place a cooked potato slice in the fridge"))) ==
          "udp_slice_object(potato,countertop);udp_heat_object(potato);"
          "udp_pick_and_put_object(potato,fridge)");
  }

  SUBCASE("decoding is deterministic, bounded, and in-vocabulary") {
    std::set<std::string> allowed;
    for (const auto& [q, gold] : corpus)
      for (const CallEntry& c : gold) allowed.insert(c.name);

    std::mt19937_64 rng(7);
    std::vector<std::string> pool = {
        "put",   "a",    "the",  "in",   "soak",  "zap",   "shove", "mug",
        "egg",   "cd",   "safe", "sink", "slice", "on",    "two",   "plate",
        "lamp",  "under", "heated", "chilled", "gibberish", "xyzzy"};
    for (int i = 0; i < 200; ++i) {
      std::string text;
      int len = 3 + static_cast<int>(rng() % 8);
      for (int k = 0; k < len; ++k)
        text += pool[rng() % pool.size()] + (k + 1 < len ? " " : "");
      Instruction q = make_instruction(text);
      ExecutableProcedure ae = plan(m, q);
      CHECK(ae.size() <= static_cast<size_t>(m.max_len));
      for (const CallEntry& c : ae) {
        CHECK(allowed.count(c.name) == 1);
        CHECK(c.args.size() == static_cast<size_t>(m.arity.at(c.name)));
      }
      CHECK(show(plan(m, q)) == show(ae));
    }
  }

  SUBCASE("per-epoch training loss never increases") {
    const std::vector<double>& l = m.fn_head.epoch_losses();
    REQUIRE(l.size() >= 2);
    for (size_t i = 1; i < l.size(); ++i) CHECK(l[i] <= l[i - 1]);
  }

  SUBCASE("models and pairs survive serialization") {
    PlannerModel r = PlannerModel::from_json(m.to_json());
    for (const auto& [q, gold] : corpus) CHECK(show(plan(r, q)) == show(plan(m, q)));

    PlannerPair p = corpus.front();
    PlannerPair back = pair_from_json(pair_to_json(p));
    CHECK(back.first.text == p.first.text);
    CHECK(show(back.second) == show(p.second));
  }

  SUBCASE("training twice gives identical models") {
    PlannerModel again = train_planner(corpus);
    CHECK(again.to_json() == m.to_json());
  }
}

TEST_CASE("training rejects malformed corpora") {
  CHECK_THROWS_AS(train_planner({}), std::invalid_argument);

  std::vector<PlannerPair> bad_arg = {
      {make_instruction("do it"), {CallEntry{"udp_pick_object", {Value::of(int64_t{3})}, false}}}};
  CHECK_THROWS_AS(train_planner(bad_arg), std::invalid_argument);

  std::vector<PlannerPair> bad_arity = {
      {make_instruction("one"), {call("udp_pick_object", {"mug"})}},
      {make_instruction("two"), {call("udp_pick_object", {"mug", "sink"})}}};
  CHECK_THROWS_AS(train_planner(bad_arity), std::invalid_argument);
}
