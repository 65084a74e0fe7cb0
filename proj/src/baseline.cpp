#include "pap/baseline.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace pap::baseline {

using learn::Example;
using learn::Features;
using learn::PointerExample;
using planner::Instruction;

bool is_answer_token(const std::string& name) {
  for (const char* t : kAnswerTokens)
    if (name == t) return true;
  return false;
}

// ---------------------------------------------------------------------------
// Candidate lists and observations

size_t first_visible_rank(const SceneState& scene, const PresearchMap& map,
                          const std::string& id) {
  static constexpr int kRots[] = {0, 90, 180, 270};
  static constexpr int kHors[] = {-30, 0, 30};
  SceneState probe = scene;
  size_t rank = 0;
  for (const Cell& cell : map.reachable_cells)
    for (int rot : kRots)
      for (int hor : kHors) {
        probe.agent = {cell, rot, hor};
        if (visible(probe, id)) return rank;
        ++rank;
      }
  return rank;
}

std::vector<std::string> ordered_candidates(const SceneState& scene,
                                            const PresearchMap& map,
                                            bool include_movables) {
  std::vector<std::pair<size_t, std::string>> ranked;
  for (const auto& [id, pose] : map.receptacle_pose)
    ranked.emplace_back(first_visible_rank(scene, map, id), id);
  if (include_movables) {
    for (const auto& [id, entry] : map.movable) {
      if (!scene.objects.count(id)) continue;
      size_t r = first_visible_rank(scene, map, id);
      size_t container = first_visible_rank(scene, map, entry.receptacle_id);
      ranked.emplace_back(std::min(r, container), id);
    }
  }
  std::sort(ranked.begin(), ranked.end());
  std::vector<std::string> out;
  out.reserve(ranked.size());
  for (auto& [rank, id] : ranked) out.push_back(std::move(id));
  return out;
}

std::vector<std::string> seen_classes(const interp::EnvSession& s) {
  std::set<std::string> classes;
  for (const Detection& d : s.view().detections) classes.insert(d.class_name);
  return {classes.begin(), classes.end()};
}

std::vector<std::string> seen_tags(const interp::EnvSession& s) {
  std::set<std::string> tags;
  for (const Detection& d : s.view().detections)
    tags.insert(d.class_name + "/" + d.id);
  return {tags.begin(), tags.end()};
}

std::vector<AtomicAction> iqa_skeleton(const std::vector<AtomicAction>& atomics) {
  std::vector<AtomicAction> out;
  for (const AtomicAction& a : atomics)
    if (a.kind == ActionKind::navigate || a.kind == ActionKind::open ||
        a.kind == ActionKind::close)
      out.push_back(a);
  return out;
}

namespace {

std::string tag_class(const std::string& tag) {
  return tag.substr(0, tag.find('/'));
}

std::vector<std::string> args_of(const AtomicAction& a) {
  switch (a.kind) {
    case ActionKind::put:
      return {a.obj, a.recep};
    case ActionKind::stop:
      return {};
    case ActionKind::navigate_pos:
    case ActionKind::rotate_to:
    case ActionKind::look_to:
      throw std::invalid_argument(
          "scan micro-action in reactive gold; project with iqa_skeleton first: " +
          describe(a));
    default:
      return {a.obj};
  }
}

}  // namespace

std::vector<ReactiveStep> annotate_gold(const std::vector<AtomicAction>& atomics,
                                        const SceneState& scene,
                                        std::shared_ptr<const PresearchMap> map,
                                        const interp::NoiseSpec& noise,
                                        const std::string& answer_token) {
  interp::EnvSession session(scene, std::move(map), noise);
  std::vector<ReactiveStep> out;
  for (size_t i = 0; i < atomics.size(); ++i) {
    const AtomicAction& a = atomics[i];
    if (a.kind == ActionKind::stop) break;
    ReactiveStep step{action_name(a.kind), args_of(a), seen_tags(session)};
    StepResult res = session.issue(a);
    if (!res.ok)
      throw std::runtime_error("gold step " + std::to_string(i) + " failed (" +
                               describe(a) + "): " + res.error.message);
    out.push_back(std::move(step));
  }
  if (!answer_token.empty())
    out.push_back({answer_token, {}, seen_tags(session)});
  return out;
}

// ---------------------------------------------------------------------------
// Features

namespace {

std::string class_of_id(const std::string& id) {
  size_t pos = id.rfind('_');
  return pos == std::string::npos ? id : id.substr(0, pos);
}

bool mentioned(const Instruction& q, const std::string& cls) {
  for (const std::string& tok : q.tokens)
    if (tok == cls || planner::singular_of(tok) == cls) return true;
  return false;
}

// Per-step features for the action head: instruction n-grams, the last two
// action names, a capped step index, current-view class indicators, a
// running summary of everything detected so far (distinct instances whose
// class the instruction mentions, capped count) and how many candidates are
// still unvisited — the flat agent's stand-in for recurrent memory.
Features action_features(const Instruction& q,
                         const std::vector<std::string>& prev, size_t t,
                         const std::vector<std::string>& now,
                         const std::set<std::string>& ever, size_t unvisited) {
  Features f;
  for (size_t i = 0; i < q.tokens.size(); ++i) {
    f["w:" + q.tokens[i]] = 1.0;
    if (i + 1 < q.tokens.size())
      f["b:" + q.tokens[i] + "|" + q.tokens[i + 1]] = 1.0;
  }
  f["t:" + std::to_string(std::min<size_t>(t, 8))] = 1.0;
  f["prev:" + (prev.empty() ? std::string("^") : prev.back())] = 1.0;
  f["prev2:" + (prev.size() < 2 ? std::string("^") : prev[prev.size() - 2])] = 1.0;

  for (const std::string& tag : now) {
    const std::string cls = tag_class(tag);
    f["see:" + cls] = 1.0;
    if (mentioned(q, cls)) f["seematch"] = 1.0;
  }
  size_t matches = 0;
  for (const std::string& tag : ever) {
    const std::string cls = tag_class(tag);
    f["ever:" + cls] = 1.0;
    if (mentioned(q, cls)) ++matches;
  }
  if (matches > 0) {
    f["evermatch"] = 1.0;
    f["matchcnt:" + std::to_string(std::min<size_t>(matches, 4))] = 1.0;
  }
  f["unvis:" + std::to_string(std::min<size_t>(unvisited, 4))] = 1.0;
  return f;
}

size_t count_unvisited(const std::vector<std::string>& candidates,
                       const std::set<std::string>& used) {
  size_t n = 0;
  for (const std::string& c : candidates) n += used.count(c) == 0;
  return n;
}

struct DecodeCtx {
  std::set<std::string> used;      // earlier argument ids
  std::string held;                // currently carried id
  std::string last_nav;            // most recent navigate target
  std::set<std::string> now_cls;   // classes in the current view
};

Features cand_features(const Instruction& q, const std::string& action,
                       const std::string& cand, size_t idx,
                       const DecodeCtx& ctx) {
  const std::string cls = class_of_id(cand);
  Features f;
  f["cls:" + cls] = 1.0;
  f["pos:" + std::to_string(std::min<size_t>(idx, 9))] = 1.0;
  f["act:" + action + "|cls:" + cls] = 1.0;
  if (ctx.used.count(cand)) {
    f["visited"] = 1.0;
    f["act:" + action + "|visited"] = 1.0;
  }
  if (cand == ctx.last_nav) {
    f["last"] = 1.0;
    f["act:" + action + "|last"] = 1.0;
  }
  if (cand == ctx.held) f["held"] = 1.0;
  if (ctx.now_cls.count(cls)) {
    f["vis"] = 1.0;
    f["act:" + action + "|vis"] = 1.0;
  }
  if (mentioned(q, cls)) {
    f["inq"] = 1.0;
    f["act:" + action + "|inq"] = 1.0;
  }
  return f;
}

std::vector<Features> cand_rows(const Instruction& q, const std::string& action,
                                const std::vector<std::string>& candidates,
                                const DecodeCtx& ctx) {
  std::vector<Features> rows;
  rows.reserve(candidates.size());
  for (size_t i = 0; i < candidates.size(); ++i)
    rows.push_back(cand_features(q, action, candidates[i], i, ctx));
  return rows;
}

// Which argument the pointer chooses; put's first argument is implicit (the
// held object) so only the destination is pointed at.
size_t pointer_slot(const std::string& action) { return action == "put" ? 1 : 0; }

int pointer_args(const ReactiveStep& g) {
  if (is_answer_token(g.action)) {
    if (!g.args.empty())
      throw std::invalid_argument("answer token with arguments");
    return 0;
  }
  if (g.action == "put") {
    if (g.args.size() != 2)
      throw std::invalid_argument("put expects two arguments");
    return 1;
  }
  if (g.args.size() > 1)
    throw std::invalid_argument("too many arguments for " + g.action);
  return static_cast<int>(g.args.size());
}

void advance_ctx(DecodeCtx* ctx, const std::string& action,
                 const std::vector<std::string>& args, bool ok) {
  for (const std::string& a : args) ctx->used.insert(a);
  if (!ok) return;
  if (action == "navigate" && !args.empty()) ctx->last_nav = args[0];
  if (action == "pickup" && !args.empty()) ctx->held = args[0];
  if (action == "put") ctx->held.clear();
}

}  // namespace

// ---------------------------------------------------------------------------
// Training

ReactiveModel train_reactive(const std::vector<ReactiveEpisode>& episodes,
                             const learn::TrainConfig& cfg) {
  if (episodes.empty()) throw std::invalid_argument("no training episodes");

  std::vector<Example> fn_data;
  std::vector<PointerExample> ptr_data;
  ReactiveModel m;
  size_t longest = 0;

  for (const ReactiveEpisode& ep : episodes) {
    std::vector<std::string> prev;
    std::set<std::string> ever;
    DecodeCtx ctx;
    longest = std::max(longest, ep.gold.size());

    for (size_t k = 0; k < ep.gold.size(); ++k) {
      const ReactiveStep& g = ep.gold[k];
      ever.insert(g.seen.begin(), g.seen.end());
      fn_data.push_back(
          {action_features(ep.instruction, prev, prev.size(), g.seen, ever,
                           count_unvisited(ep.candidates, ctx.used)),
           g.action});
      if (is_answer_token(g.action)) {
        if (k + 1 != ep.gold.size())
          throw std::invalid_argument("answer token before the end of a trace");
        pointer_args(g);  // validates
        break;
      }
      int pa = pointer_args(g);
      auto [it, fresh] = m.arity.emplace(g.action, pa);
      if (!fresh && it->second != pa)
        throw std::invalid_argument("inconsistent arity for " + g.action);
      if (pa > 0) {
        ctx.now_cls.clear();
        for (const std::string& tag : g.seen) ctx.now_cls.insert(tag_class(tag));
        const std::string& gold_id = g.args[pointer_slot(g.action)];
        auto pos = std::find(ep.candidates.begin(), ep.candidates.end(), gold_id);
        if (pos == ep.candidates.end())
          throw std::invalid_argument("gold argument not in candidate list: " +
                                      gold_id);
        ptr_data.push_back(
            {cand_rows(ep.instruction, g.action, ep.candidates, ctx),
             static_cast<int>(pos - ep.candidates.begin())});
      }
      advance_ctx(&ctx, g.action, g.args, true);
      prev.push_back(g.action);
    }

    if (ep.gold.empty() || !is_answer_token(ep.gold.back().action)) {
      std::vector<std::string> end_seen =
          ep.gold.empty() ? std::vector<std::string>{} : ep.gold.back().seen;
      fn_data.push_back(
          {action_features(ep.instruction, prev, prev.size(), end_seen, ever,
                           count_unvisited(ep.candidates, ctx.used)),
           kStopToken});
    }
  }

  m.action_head = learn::LinearModel::train(fn_data, cfg);
  if (!ptr_data.empty()) m.pointer = learn::PointerModel::train(ptr_data, cfg);
  m.max_steps = static_cast<int>(std::max<size_t>(8, 2 * longest + 2));
  return m;
}

// ---------------------------------------------------------------------------
// Decoding

RunResult run_reactive(const ReactiveModel& m, const Instruction& q,
                       interp::EnvSession& env,
                       const std::vector<std::string>& candidates, int budget) {
  RunResult r;
  std::vector<std::string> prev;
  std::set<std::string> ever;
  DecodeCtx ctx;

  for (int t = 0; t < budget; ++t) {
    std::vector<std::string> now = seen_tags(env);
    ever.insert(now.begin(), now.end());
    std::string a = m.action_head.predict(
        action_features(q, prev, prev.size(), now, ever,
                        count_unvisited(candidates, ctx.used)));
    if (a == kStopToken) {
      r.stopped = true;
      break;
    }
    ReactiveStep step{a, {}, now};
    if (is_answer_token(a)) {
      r.answer = a;
      r.stopped = true;
      r.steps.push_back({std::move(step), false, true, ""});
      break;
    }

    DecodedStep d;
    int pa = m.arity.count(a) ? m.arity.at(a) : 0;
    if (pa > 0 && !candidates.empty() && !m.pointer.feature_names().empty()) {
      ctx.now_cls.clear();
      for (const std::string& tag : now) ctx.now_cls.insert(tag_class(tag));
      int idx = m.pointer.predict(cand_rows(q, a, candidates, ctx));
      const std::string& chosen = candidates[idx];
      if (a == "put")
        step.args = {ctx.held, chosen};
      else
        step.args = {chosen};
    }

    auto kind = action_kind_from_name(a);
    if (!kind || step.args.size() != action_arity(*kind)) {
      // Syntactically invalid prediction: recorded, never sent to the world.
      d.error = "invalid action: " + a;
      ++r.invalid;
      advance_ctx(&ctx, a, step.args, false);
    } else {
      AtomicAction act;
      act.kind = *kind;
      if (act.kind == ActionKind::put) {
        act.obj = step.args[0];
        act.recep = step.args[1];
      } else if (!step.args.empty()) {
        act.obj = step.args[0];
      }
      StepResult res = env.issue(act);
      d.issued = true;
      d.ok = res.ok;
      if (!res.ok) {
        d.error = res.error.message;
        ++r.invalid;
      }
      advance_ctx(&ctx, a, step.args, res.ok);
    }
    prev.push_back(a);
    d.step = std::move(step);
    r.steps.push_back(std::move(d));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Serialization

Json episode_to_json(const ReactiveEpisode& e) {
  Json steps = Json::array();
  for (const ReactiveStep& s : e.gold)
    steps.push_back({{"action", s.action}, {"args", s.args}, {"seen", s.seen}});
  return {{"text", e.instruction.text},
          {"template", e.instruction.template_id},
          {"candidates", e.candidates},
          {"gold", steps}};
}

ReactiveEpisode episode_from_json(const Json& j) {
  ReactiveEpisode e;
  e.instruction = planner::make_instruction(j.at("text").get<std::string>(),
                                            j.value("template", ""));
  e.candidates = j.at("candidates").get<std::vector<std::string>>();
  for (const Json& s : j.at("gold"))
    e.gold.push_back({s.at("action").get<std::string>(),
                      s.at("args").get<std::vector<std::string>>(),
                      s.at("seen").get<std::vector<std::string>>()});
  return e;
}

Json ReactiveModel::to_json() const {
  return {{"format", "reactive/1"},
          {"action", action_head.to_json()},
          {"pointer",
           pointer.feature_names().empty() ? Json() : pointer.to_json()},
          {"arity", arity},
          {"max_steps", max_steps}};
}

ReactiveModel ReactiveModel::from_json(const Json& j) {
  if (j.value("format", "") != "reactive/1")
    throw std::invalid_argument("not a reactive model payload");
  ReactiveModel m;
  m.action_head = learn::LinearModel::from_json(j.at("action"));
  if (!j.at("pointer").is_null())
    m.pointer = learn::PointerModel::from_json(j.at("pointer"));
  m.arity = j.at("arity").get<std::map<std::string, int>>();
  m.max_steps = j.at("max_steps").get<int>();
  return m;
}

}  // namespace pap::baseline
