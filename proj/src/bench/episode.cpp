#include <memory>
#include <set>
#include <stdexcept>

#include "internal.hpp"
#include "pap/bench.hpp"
#include "pap/common.hpp"
#include "pap/interp/reactors.hpp"
#include "pap/presearch.hpp"

namespace pap::bench {

namespace detail {

std::string answer_text(TaskKind kind, const interp::Value& v) {
  if (kind == TaskKind::iqa_count)
    return v.is_int() ? std::to_string(v.as_int()) : "";
  if (v.is_bool()) return v.as_bool() ? "yes" : "no";
  return "";
}

FailCause trace_cause(const interp::ExecutionTrace& tr, std::string* detail) {
  switch (tr.outcome) {
    case interp::Outcome::runtime_fault:
      *detail = tr.fault;
      return FailCause::reactor;
    case interp::Outcome::budget_exceeded:
      *detail = "atomic or event budget exhausted";
      return FailCause::budget;
    case interp::Outcome::failed_action: {
      for (size_t i = tr.atomics.size(); i-- > 0;) {
        if (tr.atomic_ok[i]) continue;
        *detail = describe(tr.atomics[i]);
        return (tr.atomics[i].kind == ActionKind::navigate ||
                tr.atomics[i].kind == ActionKind::navigate_pos)
                   ? FailCause::navigation
                   : FailCause::grounding;
      }
      *detail = "failed action not recorded";
      return FailCause::grounding;
    }
    default:
      return FailCause::none;
  }
}

}  // namespace detail

bool goal_satisfied(const GoalCond& g, const SceneState& end) {
  static const std::set<std::string> kPreds = {
      "in",      "hot",     "cold",    "clean",    "sliced",   "hot_in",
      "cold_in", "clean_in", "sliced_in", "held",   "lamp_on"};
  if (!kPreds.count(g.pred))
    throw std::invalid_argument("unknown goal predicate: " + g.pred);

  auto in_recep_class = [&](const ObjectInstance& o) {
    if (o.location.kind != ObjectLocation::Kind::in_receptacle) return false;
    const ObjectInstance* rec = end.find(o.location.receptacle_id);
    return rec != nullptr && rec->class_name == g.arg;
  };

  int hits = 0;
  for (const auto& [id, o] : end.objects) {
    if (o.class_name != g.obj) continue;
    bool ok = false;
    if (g.pred == "in") ok = in_recep_class(o);
    else if (g.pred == "hot") ok = o.attrs.temperature == Temperature::hot;
    else if (g.pred == "cold") ok = o.attrs.temperature == Temperature::cold;
    else if (g.pred == "clean") ok = o.attrs.is_clean;
    else if (g.pred == "sliced") ok = o.attrs.is_sliced;
    else if (g.pred == "hot_in")
      ok = o.attrs.temperature == Temperature::hot && in_recep_class(o);
    else if (g.pred == "cold_in")
      ok = o.attrs.temperature == Temperature::cold && in_recep_class(o);
    else if (g.pred == "clean_in") ok = o.attrs.is_clean && in_recep_class(o);
    else if (g.pred == "sliced_in") ok = o.attrs.is_sliced && in_recep_class(o);
    else if (g.pred == "held") ok = end.inventory && *end.inventory == id;
    else if (g.pred == "lamp_on") ok = o.attrs.is_on;
    if (ok) ++hits;
  }
  return hits >= g.count;
}

bool verify_gold(TaskSpec& t) {
  SceneState scene = scene_for(t);
  auto map = std::make_shared<PresearchMap>(build_presearch_map(scene));
  interp::EnvSession sess(std::move(scene), map);
  interp::ExecutionTrace tr = interp::interpret(merged_program(), t.gold, sess,
                                                interp::oracle_registry());
  if (tr.outcome != interp::Outcome::success) return false;
  if (is_question(t.kind)) {
    std::string got = detail::answer_text(t.kind, tr.result);
    if (got.empty() || got != t.answer) return false;
  } else {
    if (t.goals.empty()) return false;
    for (const GoalCond& g : t.goals)
      if (!goal_satisfied(g, sess.state)) return false;
  }
  t.gold_len = static_cast<int>(tr.atomics.size());
  return true;
}

const char* cause_name(FailCause c) {
  switch (c) {
    case FailCause::none: return "none";
    case FailCause::planner: return "planner";
    case FailCause::reactor: return "reactor";
    case FailCause::grounding: return "grounding";
    case FailCause::navigation: return "navigation";
    case FailCause::budget: return "budget";
  }
  return "none";
}

EpisodeOutcome run_hmn(const TaskSpec& t, const HmnArm& arm) {
  EpisodeOutcome out;
  bool question = is_question(t.kind);
  out.subgoals_total = question ? 1 : static_cast<int>(t.goals.size());

  interp::ExecutableProcedure ae;
  try {
    if (question) {
      ae = planner::rule_plan(t.instruction);
    } else if (arm.hh_planner != nullptr) {
      ae = planner::plan(*arm.hh_planner, t.instruction);
    } else {
      out.cause = FailCause::planner;
      out.detail = "no household planner";
      return out;
    }
  } catch (const std::exception& e) {
    out.cause = FailCause::planner;
    out.detail = e.what();
    return out;
  }

  SceneState scene = scene_for(t);
  auto map = std::make_shared<PresearchMap>(build_presearch_map(scene));
  interp::NoiseSpec noise = arm.noise;
  noise.seed = mix_seed(arm.noise.seed, t.scene_seed);
  interp::EnvSession sess(std::move(scene), map, noise);
  const dsl::Program& prog = arm.program != nullptr ? *arm.program : merged_program();
  interp::ExecutionTrace tr = interp::interpret(prog, ae, sess, arm.registry,
                                                arm.limits);
  out.steps = static_cast<int>(tr.atomics.size());

  if (question) {
    if (tr.outcome == interp::Outcome::success)
      out.answer = detail::answer_text(t.kind, tr.result);
    if (!out.answer.empty() && out.answer == t.answer) {
      out.success = true;
      out.subgoals_hit = 1;
    } else if (tr.outcome != interp::Outcome::success) {
      out.cause = detail::trace_cause(tr, &out.detail);
    } else {
      out.cause = FailCause::reactor;
      out.detail = "wrong answer: " +
                   (out.answer.empty() ? std::string("(none)") : out.answer);
    }
    return out;
  }

  for (const GoalCond& g : t.goals)
    if (goal_satisfied(g, sess.state)) ++out.subgoals_hit;
  out.success = out.subgoals_hit == out.subgoals_total;
  if (!out.success) {
    if (tr.outcome != interp::Outcome::success) {
      out.cause = detail::trace_cause(tr, &out.detail);
    } else {
      out.cause = FailCause::planner;
      out.detail = "program completed without satisfying the goals";
    }
  }
  return out;
}

EpisodeOutcome run_reactive_episode(const TaskSpec& t, const ReactiveArm& arm) {
  EpisodeOutcome out;
  bool question = is_question(t.kind);
  out.subgoals_total = question ? 1 : static_cast<int>(t.goals.size());
  const baseline::ReactiveModel* model = question ? arm.iqa : arm.hh;
  if (model == nullptr) {
    out.cause = FailCause::planner;
    out.detail = "no reactive model for this task family";
    return out;
  }

  SceneState scene = scene_for(t);
  auto map = std::make_shared<PresearchMap>(build_presearch_map(scene));
  std::vector<std::string> candidates =
      baseline::ordered_candidates(scene, *map, /*include_movables=*/!question);
  interp::NoiseSpec noise = arm.noise;
  noise.seed = mix_seed(arm.noise.seed, t.scene_seed);
  interp::EnvSession sess(std::move(scene), map, noise);
  baseline::RunResult rr = baseline::run_reactive(*model, t.instruction, sess,
                                                  candidates, model->max_steps);
  for (const baseline::DecodedStep& s : rr.steps)
    if (s.issued) ++out.steps;

  auto fail_cause = [&rr](std::string* d) {
    if (!rr.stopped) {
      *d = "step budget exhausted";
      return FailCause::budget;
    }
    if (rr.invalid > 0) {
      *d = std::to_string(rr.invalid) + " rejected actions";
      return FailCause::grounding;
    }
    *d = "wrong rollout";
    return FailCause::planner;
  };

  if (question) {
    out.answer = semantic_answer(t.kind, rr.answer);
    out.success = !out.answer.empty() && out.answer == t.answer;
    out.subgoals_hit = out.success ? 1 : 0;
    if (!out.success) {
      if (rr.answer.empty()) {
        out.cause = fail_cause(&out.detail);
      } else {
        out.cause = FailCause::planner;
        out.detail = "wrong answer: " +
                     (out.answer.empty() ? rr.answer : out.answer);
      }
    }
    return out;
  }

  for (const GoalCond& g : t.goals)
    if (goal_satisfied(g, sess.state)) ++out.subgoals_hit;
  out.success = out.subgoals_hit == out.subgoals_total;
  if (!out.success) out.cause = fail_cause(&out.detail);
  return out;
}

}  // namespace pap::bench
