#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "pap/baseline.hpp"
#include "pap/interp/interpreter.hpp"
#include "pap/jsonio.hpp"
#include "pap/learn/reactor_models.hpp"
#include "pap/library.hpp"
#include "pap/planner.hpp"
#include "pap/scene_gen.hpp"
#include "pap/world.hpp"

namespace pap::bench {

// ---------------------------------------------------------------------------
// Task suites

enum class TaskKind {
  iqa_existence,
  iqa_count,
  iqa_contain,
  hh_pick_place,
  hh_pick_two_place,
  hh_clean_place,
  hh_heat_place,
  hh_cool_place,
  hh_slice_place,
  hh_examine_light,
};

const char* kind_name(TaskKind k);
TaskKind kind_from_name(const std::string& s);
std::vector<TaskKind> all_kinds();
bool is_question(TaskKind k);

// One declarative condition over the end state: satisfied when at least
// `count` instances of class `obj` meet the predicate. Predicates:
// in (inside a receptacle of class `arg`), hot, cold, clean, sliced, the
// four *_in conjunctions, held (by the agent), and lamp_on.
struct GoalCond {
  std::string pred;
  std::string obj;
  std::string arg;
  int count = 1;
};

bool goal_satisfied(const GoalCond& g, const SceneState& end);

struct TaskSpec {
  std::string id;           // "<kind>/<profile>/<index>"
  TaskKind kind = TaskKind::iqa_existence;
  planner::Instruction instruction;
  uint64_t scene_seed = 0;
  SceneConfig scene;        // regenerate with scene_for; never stored inline
  std::string split;        // "seen" or "unseen"
  std::string answer;       // questions: "yes"/"no" or a digit string
  std::vector<GoalCond> goals;          // household tasks only
  interp::ExecutableProcedure gold;     // gold executable procedure
  std::vector<std::string> subgoals;    // annotated subgoal sequence
  std::string obj_class;
  std::string recep_class;  // empty when the task has no destination
  int gold_len = 0;         // canonical atomic count (0 when not measured)
};

SceneState scene_for(const TaskSpec& t);
Json task_to_json(const TaskSpec& t);
TaskSpec task_from_json(const Json& j);

// Rolls the gold procedure out under oracle reactors on the task's scene.
// Returns whether the rollout succeeds and meets the task's gold (answer or
// goal conditions); fills gold_len on success.
bool verify_gold(TaskSpec& t);

// No scene satisfying the task's constraints within the attempt budget.
class InfeasibleTask : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The profile picks scene styles and surface templates: "train" and
// "eval_seen" share styles but render disjoint instruction strings;
// "eval_unseen" uses held-out styles and phrasings plus rare-verb
// paraphrases on a fifth of its tasks.
struct SuiteConfig {
  std::vector<TaskKind> kinds;  // empty means all ten
  int per_kind = 10;
  std::string profile = "train";
  uint64_t seed = 0;
  bool measure_gold = true;  // oracle-roll the gold to fill gold_len and verify
  int max_attempts = 30;     // scene retries per task before InfeasibleTask
};

std::vector<TaskSpec> generate_suite(const SuiteConfig& cfg);

// Both shipped libraries merged into one program (manipulation + questions).
const dsl::Program& merged_program();

// Receptacle and fixture ids with no line of sight from any rotation/horizon
// at the agent's start cell. The first search procedure generation misses
// exactly these.
std::vector<std::string> hidden_from_start(const SceneState& scene);

// Verbatim instruction overlap between the two suites, plus style ids shared
// across the seen/unseen boundary. Empty means the split is clean.
std::vector<std::string> split_hygiene_violations(const std::vector<TaskSpec>& a,
                                                  const std::vector<TaskSpec>& b);

// Answer-token mapping for the reactive agent: yes/no questions use the
// first two answer tokens, count questions use token k for count k.
std::string answer_token_for(TaskKind kind, const std::string& answer);
std::string semantic_answer(TaskKind kind, const std::string& token);

// ---------------------------------------------------------------------------
// Episodes

enum class FailCause { none, planner, reactor, grounding, navigation, budget };
const char* cause_name(FailCause c);

struct EpisodeOutcome {
  bool success = false;
  int subgoals_hit = 0;
  int subgoals_total = 1;
  std::string answer;  // semantic answer emitted, empty when none
  int steps = 0;       // atomic actions issued to the environment
  FailCause cause = FailCause::none;
  std::string detail;
};

// Hierarchical arm: questions go through the rule planner, household
// instructions through the learned planner (its absence fails them as
// planner errors). The noise seed is re-derived per task so paired arms see
// the same channel.
struct HmnArm {
  const dsl::Program* program = nullptr;
  interp::ReactorRegistry registry;
  const planner::PlannerModel* hh_planner = nullptr;
  interp::NoiseSpec noise;
  interp::InterpLimits limits;
};

EpisodeOutcome run_hmn(const TaskSpec& t, const HmnArm& arm);

// Reactive arm: one model per benchmark family, matching how each was
// trained (questions answer over receptacle candidates, household tasks
// point into the full candidate list).
struct ReactiveArm {
  const baseline::ReactiveModel* hh = nullptr;
  const baseline::ReactiveModel* iqa = nullptr;
  interp::NoiseSpec noise;
};

EpisodeOutcome run_reactive_episode(const TaskSpec& t, const ReactiveArm& arm);

// Runs one episode per task, in task order, fanning out over a thread pool.
// `threads` <= 0 picks a default from the hardware.
std::vector<EpisodeOutcome> run_episodes(
    const std::vector<TaskSpec>& tasks,
    const std::function<EpisodeOutcome(const TaskSpec&)>& runner, int threads = 0);

// ---------------------------------------------------------------------------
// Metrics

struct Metrics {
  int n = 0;
  double sr = 0;   // whole-task success rate
  double ssr = 0;  // mean satisfied-subgoal fraction
  int n_questions = 0;
  double answer_acc = 0;  // over question tasks; 0 when there are none
  std::map<std::string, double> kind_answer_acc;
  std::map<std::string, double> bucket_sr;  // keyed "1-10" / "11-20" / "21+"
  std::map<std::string, int> bucket_n;
  std::map<std::string, int> cause_counts;
};

std::string bucket_of(int gold_len);
Metrics aggregate(const std::vector<TaskSpec>& tasks,
                  const std::vector<EpisodeOutcome>& outcomes);
Json metrics_to_json(const Metrics& m);

// ---------------------------------------------------------------------------
// Arm training

struct TrainedHmn {
  planner::PlannerModel planner;
  std::shared_ptr<learn::ReactorModels> reactors;
};

// Planner pairs from the household tasks, reactor labels induced from the
// canonical rollouts of every task in the list.
TrainedHmn train_hmn_arm(const std::vector<TaskSpec>& train, uint64_t seed,
                         int threads = 0);

// Gold reactive episodes for the given tasks: canonical rollout, question
// traces projected to their receptacle skeleton and closed with the answer
// token, visibility tags recorded through the given noise channel.
std::vector<baseline::ReactiveEpisode> reactive_corpus(
    const std::vector<TaskSpec>& tasks, const interp::NoiseSpec& noise,
    int threads = 0);

baseline::ReactiveModel train_reactive_arm(const std::vector<TaskSpec>& train,
                                           const interp::NoiseSpec& noise,
                                           uint64_t seed, int threads = 0);

// ---------------------------------------------------------------------------
// Experiment designs

struct ExperimentConfig {
  std::string design;  // head_to_head, data_efficiency, few_shot, library_ab,
                       // length_buckets, perception_sweep
  uint64_t seed = 0;
  int seeds = 3;    // independent data draws for the repeated designs
  int threads = 0;  // 0 picks a hardware default

  int hh_train_per_kind = 72;  // 7 kinds -> 504 training tasks
  int hh_eval_per_kind = 29;   // 7 kinds -> 203 eval tasks per split
  int iqa_train_per_type = 1000;
  int iqa_eval_per_type = 100;
  double epsilon = 0.1;  // perception noise for the question benchmark

  std::vector<double> fractions = {0.05, 0.1, 0.2, 0.5, 1.0};

  int few_shot_n = 4;
  int few_shot_cap = 20;
  int few_shot_splits = 4;

  int ab_tasks = 60;
  int bootstrap = 2000;

  std::vector<double> epsilons = {0.0, 0.05, 0.1, 0.2};
  int sweep_train_per_type = 200;
  int sweep_eval_per_type = 60;
};

Json experiment_config_to_json(const ExperimentConfig& cfg);
ExperimentConfig experiment_config_from_json(const Json& j);

struct ExperimentReport {
  std::string design;
  std::string config_hash;
  Json report;                   // config, seeds, and a per-design summary
  std::vector<std::string> csv;  // plot-ready rows, header line first
};

// Validates the design, trains every arm with seeds derived from the config,
// and evaluates on freshly generated suites. Deterministic for a given
// config regardless of thread count.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

}  // namespace pap::bench
