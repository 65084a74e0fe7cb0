#pragma once

#include <array>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "pap/interp/session.hpp"
#include "pap/learn/linear_model.hpp"
#include "pap/planner.hpp"
#include "pap/presearch.hpp"
#include "pap/world.hpp"

namespace pap::baseline {

// Reactive flat-policy agent: one atomic action per step, argument chosen by
// a pointer over a fixed candidate list, answers emitted as three extra
// vocabulary tokens (the harness maps tokens to yes/no or counts per
// question type). Trained on canonicalized traces so it competes against the
// hierarchical agent on the same presearch map and perception channel.

inline constexpr const char* kStopToken = "<stop>";
inline constexpr std::array<const char*, 3> kAnswerTokens = {"<ans_1>", "<ans_2>",
                                                             "<ans_3>"};
bool is_answer_token(const std::string& name);

struct ReactiveStep {
  std::string action;             // atomic name or answer token
  std::vector<std::string> args;  // instance ids
  // Detections visible before the step as "class/id" tags. The class is the
  // (possibly noise-flipped) detected label; the id is only a track key for
  // counting distinct instances and never becomes a feature string.
  std::vector<std::string> seen;
};

struct ReactiveEpisode {
  planner::Instruction instruction;
  std::vector<std::string> candidates;  // instance ids, near-to-far from start
  std::vector<ReactiveStep> gold;
};

Json episode_to_json(const ReactiveEpisode& e);
ReactiveEpisode episode_from_json(const Json& j);

// Rank of the first sweep pose (reachable cells near-to-far, all rotations
// and horizons per cell) from which `id` is visible; one past the last rank
// when it never is. This is the order a grid sweep first detects things in.
size_t first_visible_rank(const SceneState& scene, const PresearchMap& map,
                          const std::string& id);

// Interaction candidates in first-sight order of the sweep (ties by id), the
// same enumeration order the canonical question traces visit receptacles in.
// Movables hidden inside receptacles inherit their container's rank.
std::vector<std::string> ordered_candidates(const SceneState& scene,
                                            const PresearchMap& map,
                                            bool include_movables);

// Classes visible through the session's noise channel, sorted and deduplicated.
std::vector<std::string> seen_classes(const interp::EnvSession& s);
// Same view as "class/id" tags (see ReactiveStep::seen).
std::vector<std::string> seen_tags(const interp::EnvSession& s);

// Keeps only the receptacle-level actions of a canonical question trace
// (navigate/open/close), dropping the cell-by-cell scan micro-actions the
// flat agent does not model.
std::vector<AtomicAction> iqa_skeleton(const std::vector<AtomicAction>& atomics);

// Replays `atomics` over a fresh session and records what was visible before
// each step. Appends a final answer step when `answer_token` is non-empty.
// Throws std::runtime_error if a step fails (the trace is not gold).
std::vector<ReactiveStep> annotate_gold(const std::vector<AtomicAction>& atomics,
                                        const SceneState& scene,
                                        std::shared_ptr<const PresearchMap> map,
                                        const interp::NoiseSpec& noise = {},
                                        const std::string& answer_token = "");

struct ReactiveModel {
  learn::LinearModel action_head;  // atomic names + answer tokens + stop
  learn::PointerModel pointer;     // index into the candidate list
  std::map<std::string, int> arity;  // pointer arguments per action (0 or 1)
  int max_steps = 64;

  Json to_json() const;
  static ReactiveModel from_json(const Json& j);
};

// Maximum-likelihood training of both heads on gold steps; every episode
// contributes one example per step plus a terminal stop example (unless the
// gold already ends in an answer token, which is terminal by itself).
// Throws std::invalid_argument on an empty corpus, on a gold argument missing
// from the episode's candidate list, and on inconsistent arities.
ReactiveModel train_reactive(const std::vector<ReactiveEpisode>& episodes,
                             const learn::TrainConfig& cfg = {});

struct DecodedStep {
  ReactiveStep step;
  bool issued = false;  // sent to the environment (answer/stop steps are not)
  bool ok = false;      // environment accepted it
  std::string error;
};

struct RunResult {
  std::vector<DecodedStep> steps;
  std::string answer;    // raw answer token, empty when none was emitted
  bool stopped = false;  // model terminated on its own before the budget ran out
  int invalid = 0;       // issued steps the environment rejected
};

// Greedy per-step decode against a live session. Invalid actions are logged
// as failed steps and decoding continues; the environment guards itself.
RunResult run_reactive(const ReactiveModel& m, const planner::Instruction& q,
                       interp::EnvSession& env,
                       const std::vector<std::string>& candidates, int budget);

}  // namespace pap::baseline
