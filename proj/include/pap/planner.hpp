#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "pap/interp/interpreter.hpp"
#include "pap/learn/linear_model.hpp"

namespace pap::planner {

// A natural-language request plus its deterministic tokenization (lowercase,
// punctuation split off into separate tokens).
struct Instruction {
  std::string text;
  std::vector<std::string> tokens;
  std::string template_id;  // empty when unknown / free-form
};

Instruction make_instruction(const std::string& text,
                             const std::string& template_id = "");
std::vector<std::string> tokenize(const std::string& text);

// Surface-form helpers shared with the task generators, so questions are
// rendered and parsed with the same inflection rules.
std::string plural_of(const std::string& cls);
std::string singular_of(const std::string& word);

// Maps a templated question to one of the three question procedures:
// existence -> udp_check_obj_exist(obj), count -> udp_count_obj(obj),
// containment -> udp_check_contain(obj, recep). Throws std::invalid_argument
// when no template matches.
interp::ExecutableProcedure rule_plan(const Instruction& q);

// Subgoal alphabet: Goto, Pick (Pickup accepted), Put, Clean, Heat, Cool,
// Slice, Toggle. Maps an annotated subgoal sequence to the call-name pattern
// of its executable procedure; ordering variants map to the same pattern.
// Throws std::invalid_argument for empty or unmapped sequences.
std::vector<std::string> induce_planner_labels(
    const std::vector<std::string>& subgoals);

// Greedy per-step decoder over a constrained vocabulary: one head picks the
// next call name (or stop), one head fills each argument slot conditioned on
// the instruction and the chosen call.
struct PlannerModel {
  learn::LinearModel fn_head;
  learn::LinearModel arg_head;
  std::map<std::string, int> arity;       // call name -> slot count
  std::map<std::string, bool> atomic_fn;  // call name -> bare atomic?
  int max_len = 8;

  Json to_json() const;
  static PlannerModel from_json(const Json& j);
};

using PlannerPair = std::pair<Instruction, interp::ExecutableProcedure>;

// Throws std::invalid_argument on an empty corpus, a non-string gold
// argument (out-of-vocabulary token), or inconsistent arities for one call
// name.
PlannerModel train_planner(const std::vector<PlannerPair>& pairs,
                           const learn::TrainConfig& cfg = {});

// Greedy decode until the stop token or the length cap. Every emitted call
// name and argument token was seen in training, so the output always
// validates against the library the gold plans came from.
interp::ExecutableProcedure plan(const PlannerModel& m, const Instruction& q);

// JSONL row for one supervised pair: {"text": ..., "a_e": [...]}.
Json pair_to_json(const PlannerPair& p);
PlannerPair pair_from_json(const Json& j);

}  // namespace pap::planner
