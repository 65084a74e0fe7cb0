#include "pap/learn/reactor_models.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

namespace pap::learn {

using interp::EnvSession;
using interp::ObjRef;
using interp::Reactor;
using interp::ReactorRegistry;
using interp::StepLogEntry;
using interp::Value;

AttrFlags flags_from_state(const std::string& joint_state) {
  if (joint_state == kAttrClosedOpenable) return {true, false, true};
  if (joint_state == kAttrOpenOpenable) return {true, true, false};
  if (joint_state == kAttrNotOpenable) return {false, false, false};
  throw std::invalid_argument("flags_from_state: unknown state " + joint_state);
}

void InducedLabels::append(InducedLabels other) {
  attr.insert(attr.end(), other.attr.begin(), other.attr.end());
  refind.insert(refind.end(), other.refind.begin(), other.refind.end());
  rel.insert(rel.end(), other.rel.begin(), other.rel.end());
}

namespace {

bool interaction(ActionKind k) {
  switch (k) {
    case ActionKind::pickup:
    case ActionKind::put:
    case ActionKind::open:
    case ActionKind::close:
    case ActionKind::toggle_on:
    case ActionKind::toggle_off:
    case ActionKind::slice:
      return true;
    default:
      return false;
  }
}

// Latest open of this receptacle in the executed prefix with no close of it
// in between.
bool open_pending(const std::vector<AtomicAction>& trace, size_t upto,
                  const std::string& recep_id) {
  for (size_t i = upto; i-- > 0;) {
    if (trace[i].kind == ActionKind::close && trace[i].obj == recep_id) return false;
    if (trace[i].kind == ActionKind::open && trace[i].obj == recep_id) return true;
  }
  return false;
}

}  // namespace

InducedLabels induce_reactor_labels(const std::vector<AtomicAction>& trace,
                                    const SceneState& scene,
                                    std::shared_ptr<const PresearchMap> map) {
  InducedLabels out;
  EnvSession replay(scene, std::move(map));
  for (size_t k = 0; k < trace.size(); ++k) {
    const AtomicAction& a = trace[k];

    // Mine the containment evidence from the state the action acts on.
    if (a.kind == ActionKind::pickup || a.kind == ActionKind::put) {
      std::string recep_id;
      std::string obj_cls;
      if (a.kind == ActionKind::pickup) {
        const ObjectInstance* o = replay.state.find(a.obj);
        if (o && o->location.kind == ObjectLocation::Kind::in_receptacle) {
          recep_id = o->location.receptacle_id;
          obj_cls = o->class_name;
        }
      } else {
        recep_id = a.recep;
      }
      if (const ObjectInstance* r = replay.state.find(recep_id)) {
        if (a.kind == ActionKind::pickup)
          out.refind.push_back({obj_cls, r->class_name});
        if (open_pending(trace, k, recep_id))
          out.attr.push_back({r->class_name, true, false});
        else
          out.attr.push_back({r->class_name, false, false});
      }
    }

    StepResult res = replay.issue(a);
    if (!res.ok)
      throw std::runtime_error("trace not replayable at step " +
                               std::to_string(k) + " (" + describe(a) +
                               "): " + res.error.message);

    // Relation evidence: every visible movable x receptacle box pair at
    // interaction steps, labeled from ground truth.
    if (!interaction(a.kind)) continue;
    Observation obs = replay.true_view();
    for (const Detection& d_obj : obs.detections) {
      const ObjectInstance* o = replay.state.find(d_obj.id);
      if (!o || !o->attrs.pickupable) continue;
      for (const Detection& d_rec : obs.detections) {
        const ObjectInstance* r = replay.state.find(d_rec.id);
        if (!r || !r->attrs.is_receptacle) continue;
        bool in = o->location.kind == ObjectLocation::Kind::in_receptacle &&
                  o->location.receptacle_id == d_rec.id;
        out.rel.push_back({d_obj.bbox, d_rec.bbox, in});
      }
    }
  }
  return out;
}

Json labels_to_json(const InducedLabels& l) {
  Json attr = Json::array();
  for (const AttrExample& e : l.attr)
    attr.push_back({{"cls", e.recep_class},
                    {"openable", e.openable},
                    {"is_open", e.is_open}});
  Json refind = Json::array();
  for (const RefindExample& e : l.refind)
    refind.push_back({{"obj", e.obj_class}, {"recep", e.recep_class}});
  Json rel = Json::array();
  for (const RelExample& e : l.rel)
    rel.push_back({{"obj", {e.obj.x0, e.obj.y0, e.obj.x1, e.obj.y1}},
                   {"recep", {e.recep.x0, e.recep.y0, e.recep.x1, e.recep.y1}},
                   {"in", e.in}});
  return Json{{"format", "labels/1"},
              {"attr", attr},
              {"refind", refind},
              {"rel", rel}};
}

InducedLabels labels_from_json(const Json& j) {
  if (j.at("format") != "labels/1")
    throw std::invalid_argument("labels_from_json: unknown format");
  InducedLabels l;
  for (const Json& e : j.at("attr"))
    l.attr.push_back({e.at("cls").get<std::string>(), e.at("openable").get<bool>(),
                      e.at("is_open").get<bool>()});
  for (const Json& e : j.at("refind"))
    l.refind.push_back(
        {e.at("obj").get<std::string>(), e.at("recep").get<std::string>()});
  for (const Json& e : j.at("rel")) {
    const Json& o = e.at("obj");
    const Json& r = e.at("recep");
    l.rel.push_back({{o.at(0), o.at(1), o.at(2), o.at(3)},
                     {r.at(0), r.at(1), r.at(2), r.at(3)},
                     e.at("in").get<bool>()});
  }
  return l;
}

Features attr_features(const std::string& recep_class) {
  return {{"cls:" + recep_class, 1.0}};
}

Features refind_features(const std::string& obj_class) {
  return {{"obj:" + obj_class, 1.0}};
}

Features rel_features(const BBox& obj, const BBox& recep) {
  double a = obj.area();
  double ratio = a > 0 ? intersection_area(obj, recep) / a : 0.0;
  double ocx = 0.5 * (obj.x0 + obj.x1), ocy = 0.5 * (obj.y0 + obj.y1);
  double rcx = 0.5 * (recep.x0 + recep.x1), rcy = 0.5 * (recep.y0 + recep.y1);
  // Deliberately no absolute-size features: box sizes encode scene layout,
  // not containment, and leak badly across scenes.
  return {{"overlap", ratio}, {"center_off", std::hypot(ocx - rcx, ocy - rcy)}};
}

ReactorModels train_reactor_models(const InducedLabels& labels,
                                   const TrainConfig& cfg) {
  ReactorModels m;
  if (!labels.attr.empty()) {
    std::vector<Example> data;
    for (const AttrExample& e : labels.attr) {
      std::string state = !e.openable ? kAttrNotOpenable
                          : e.is_open ? kAttrOpenOpenable
                                      : kAttrClosedOpenable;
      data.push_back({attr_features(e.recep_class), state});
    }
    m.attr = LinearModel::train(data, cfg);
  }
  if (!labels.refind.empty()) {
    std::vector<Example> data;
    for (const RefindExample& e : labels.refind)
      data.push_back({refind_features(e.obj_class), e.recep_class});
    m.refind = LinearModel::train(data, cfg);
  }
  if (!labels.rel.empty()) {
    std::vector<Example> data;
    for (const RelExample& e : labels.rel)
      data.push_back({rel_features(e.obj, e.recep), e.in ? "in" : "not_in"});
    m.rel = LinearModel::train(data, cfg);
  }
  return m;
}

Json ReactorModels::to_json() const {
  return Json{{"format", "reactor-models/1"},
              {"attr", has_attr() ? attr.to_json() : Json()},
              {"refind", has_refind() ? refind.to_json() : Json()},
              {"rel", has_rel() ? rel.to_json() : Json()}};
}

ReactorModels ReactorModels::from_json(const Json& j) {
  if (j.at("format") != "reactor-models/1")
    throw std::invalid_argument("ReactorModels: unknown format");
  ReactorModels m;
  if (!j.at("attr").is_null()) m.attr = LinearModel::from_json(j.at("attr"));
  if (!j.at("refind").is_null()) m.refind = LinearModel::from_json(j.at("refind"));
  if (!j.at("rel").is_null()) m.rel = LinearModel::from_json(j.at("rel"));
  return m;
}

namespace {

// Scan-time class knowledge for an instance id, else the name itself.
std::string scan_class(const EnvSession& s, const std::string& name) {
  const ObjectInstance* o = s.state.find(name);
  return o ? o->class_name : name;
}

std::string target_class(const EnvSession& s, const Value& v) {
  if (v.is_obj()) return v.as_obj().cls;
  if (v.is_str()) return scan_class(s, v.as_str());
  throw std::runtime_error("learned reactor: expected an object, got " +
                           v.type_name());
}

Value rel_answer(bool in) {
  return Value::of(std::string(in ? interp::kRelInRecep : interp::kRelNotIn));
}

struct LearnedBase : Reactor {
  std::shared_ptr<const ReactorModels> models;
  std::shared_ptr<const ReactorRegistry> fallback;
  LearnedBase(std::shared_ptr<const ReactorModels> m,
              std::shared_ptr<const ReactorRegistry> f)
      : models(std::move(m)), fallback(std::move(f)) {}
};

struct LearnedAttr : LearnedBase {
  using LearnedBase::LearnedBase;

  Value query(const std::vector<Value>& args, const EnvSession& s) const override {
    if (args.size() < 2 || !args[1].is_str())
      throw std::runtime_error("check_obj_attr: expected (object, attribute)");
    const std::string& attr = args[1].as_str();
    bool door_flag =
        attr == "openable" || attr == "is_open" || attr == "is_closed";
    if (!door_flag || !models->has_attr())
      return fallback->query("check_obj_attr", args, s);

    std::string cls = target_class(s, args[0]);
    AttrFlags flags = flags_from_state(models->attr.predict(attr_features(cls)));

    // The agent's own door actions override the prediction.
    std::optional<bool> memo;
    for (const StepLogEntry& e : s.step_log) {
      if (!e.ok) continue;
      if (e.action.kind != ActionKind::open && e.action.kind != ActionKind::close)
        continue;
      if (scan_class(s, e.action.obj) != cls) continue;
      memo = e.action.kind == ActionKind::open;
    }
    bool openable = memo.has_value() || flags.is_openable;
    bool is_open = memo.value_or(openable && flags.is_open);
    if (attr == "openable") return Value::of(openable);
    if (attr == "is_open") return Value::of(openable && is_open);
    return Value::of(openable && !is_open);
  }
};

struct LearnedReFind : LearnedBase {
  using LearnedBase::LearnedBase;

  Value query(const std::vector<Value>& args, const EnvSession& s) const override {
    if (!models->has_refind()) return fallback->query("find_recep", args, s);
    if (args.empty())
      throw std::runtime_error("find_recep: missing argument");
    std::string cls = target_class(s, args[0]);

    // Objects the agent itself moved are known, not predicted.
    std::optional<std::string> moved_to;
    bool moved = false;
    for (const StepLogEntry& e : s.step_log) {
      if (!e.ok) continue;
      if (e.action.kind == ActionKind::pickup && scan_class(s, e.action.obj) == cls) {
        moved = true;
        moved_to.reset();  // in hand
      }
      if (e.action.kind == ActionKind::put && scan_class(s, e.action.obj) == cls) {
        moved = true;
        moved_to = e.action.recep;
      }
    }
    if (moved) {
      if (!moved_to) return Value::none();
      return Value::of(ObjRef{*moved_to, scan_class(s, *moved_to)});
    }

    // Walk the predicted receptacle classes best-first until one exists in
    // the scanned scene.
    for (const auto& [recep_cls, prob] : models->refind.predict_proba(
             refind_features(cls))) {
      (void)prob;
      for (const auto& kv : s.map->receptacle_pose)
        if (scan_class(s, kv.first) == recep_cls)
          return Value::of(ObjRef{kv.first, recep_cls});
    }
    return Value::none();
  }
};

struct LearnedRel : LearnedBase {
  using LearnedBase::LearnedBase;

  Value query(const std::vector<Value>& args, const EnvSession& s) const override {
    if (!models->has_rel())
      return fallback->query("check_obj_recep_rel", args, s);
    if (args.size() < 2)
      throw std::runtime_error("check_obj_recep_rel: expected (object, receptacle)");
    Observation obs = s.view();
    auto box_of = [&](const Value& v) -> std::optional<BBox> {
      if (v.is_obj()) {
        for (const Detection& d : obs.detections)
          if (d.id == v.as_obj().id) return d.bbox;
        return std::nullopt;
      }
      auto ref = interp::mask_instance(s, obs, v.is_str() ? v.as_str() : v.show());
      if (!ref) return std::nullopt;
      for (const Detection& d : obs.detections)
        if (d.id == ref->id) return d.bbox;
      return std::nullopt;
    };
    auto obj = box_of(args[0]);
    auto recep = box_of(args[1]);
    if (!obj || !recep) return rel_answer(false);
    return rel_answer(models->rel.predict(rel_features(*obj, *recep)) == "in");
  }
};

}  // namespace

ReactorRegistry learned_registry(std::shared_ptr<const ReactorModels> models) {
  auto fallback =
      std::make_shared<const ReactorRegistry>(interp::heuristic_registry());
  ReactorRegistry reg = interp::heuristic_registry();
  auto refind = std::make_shared<LearnedReFind>(models, fallback);
  reg.add("check_obj_attr", std::make_shared<LearnedAttr>(models, fallback));
  reg.add("check_obj_recep_rel", std::make_shared<LearnedRel>(models, fallback));
  reg.add("find_recep", refind);
  reg.add("find_obj_recep", refind);
  return reg;
}

}  // namespace pap::learn
