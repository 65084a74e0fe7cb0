#include "pap/interp/reactors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pap::interp {

Value ReactorRegistry::query(const std::string& name, const std::vector<Value>& args,
                             const EnvSession& s) const {
  auto it = reactors_.find(name);
  if (it == reactors_.end()) throw std::runtime_error("unknown reactor: " + name);
  return it->second->query(args, s);
}

bool rel_from_boxes(const BBox& obj, const BBox& recep) {
  double a = obj.area();
  if (a <= 0) return false;
  // Strictly over 70%: an overlap of exactly 0.70 does not count.
  return intersection_area(obj, recep) / a > 0.70 + 1e-9;
}

RelAnswer rel_checker_heuristic(const BBox& obj, const BBox& recep) {
  if (obj.area() <= 0 || recep.area() <= 0)
    throw std::invalid_argument("rel_checker_heuristic: zero-area box");
  return rel_from_boxes(obj, recep) ? RelAnswer::obj_in_recep : RelAnswer::not_in;
}

std::optional<std::string> resolve_instance(const EnvSession& s, const Value& v) {
  if (v.is_obj())
    return s.state.find(v.as_obj().id) ? std::optional(v.as_obj().id) : std::nullopt;
  if (!v.is_str()) return std::nullopt;
  const std::string& name = v.as_str();
  if (s.state.find(name)) return name;  // already an instance id
  // Class name: untouched first, then nearest, then smallest id.
  std::optional<std::string> best;
  bool best_untouched = false;
  double best_dist = 0;
  for (const auto& [id, obj] : s.state.objects) {
    if (obj.class_name != name) continue;
    bool untouched = !s.touched.count(id);
    double dist = distance_to(s.state, id);
    bool better;
    if (!best) {
      better = true;
    } else if (untouched != best_untouched) {
      better = untouched;
    } else if (std::abs(dist - best_dist) > 1e-9) {
      better = dist < best_dist;
    } else {
      better = false;  // map order is id order, so the first tie wins
    }
    if (better) {
      best = id;
      best_untouched = untouched;
      best_dist = dist;
    }
  }
  return best;
}

std::optional<ObjRef> mask_instance(const EnvSession& s, const Observation& obs,
                                    const std::string& cls_or_id) {
  const Detection* best = nullptr;
  bool best_untouched = false;
  for (const Detection& det : obs.detections) {
    if (det.class_name != cls_or_id && det.id != cls_or_id) continue;
    bool untouched = !s.touched.count(det.id);
    bool better;
    if (!best) {
      better = true;
    } else if (untouched != best_untouched) {
      better = untouched;
    } else if (std::abs(det.bbox.area() - best->bbox.area()) > 1e-12) {
      better = det.bbox.area() > best->bbox.area();
    } else {
      better = det.id < best->id;
    }
    if (better) {
      best = &det;
      best_untouched = untouched;
    }
  }
  if (!best) return std::nullopt;
  return ObjRef{best->id, best->class_name};
}

std::map<std::string, std::string> believed_locations(const EnvSession& s) {
  std::map<std::string, std::string> loc;
  for (const auto& [id, entry] : s.map->movable) loc[id] = entry.receptacle_id;
  for (const StepLogEntry& e : s.step_log) {
    if (!e.ok) continue;
    if (e.action.kind == ActionKind::pickup) loc[e.action.obj] = "";  // in hand
    if (e.action.kind == ActionKind::put) loc[e.action.obj] = e.action.recep;
  }
  return loc;
}

namespace {

// --- small shared helpers ---------------------------------------------------

const Value& arg_at(const std::vector<Value>& args, size_t i, const char* reactor) {
  if (i >= args.size())
    throw std::runtime_error(std::string(reactor) + ": missing argument " +
                             std::to_string(i));
  return args[i];
}

std::string want_str(const Value& v, const char* reactor) {
  if (v.is_str()) return v.as_str();
  throw std::runtime_error(std::string(reactor) + ": expected a string, got " +
                           v.type_name());
}

// Class name or instance id as text; refs decay to their id.
std::string name_of(const Value& v, const char* reactor) {
  if (v.is_obj()) return v.as_obj().id;
  if (v.is_str()) return v.as_str();
  throw std::runtime_error(std::string(reactor) + ": expected an object, got " +
                           v.type_name());
}

bool is_receptacle_name(const EnvSession& s, const std::string& name) {
  if (const ObjectInstance* obj = s.state.find(name))
    return obj->attrs.is_receptacle;
  return known_class(name) && class_info(name).is_receptacle;
}

// --- oracle reactors --------------------------------------------------------

struct OracleMask : Reactor {
  Value query(const std::vector<Value>& args, const EnvSession& s) const override {
    const Value& v = arg_at(args, 0, "gen_obj_mask");
    Observation obs = s.true_view();
    if (v.is_obj()) {
      for (const Detection& d : obs.detections)
        if (d.id == v.as_obj().id) return Value::of(ObjRef{d.id, d.class_name});
      return Value::none();
    }
    auto ref = mask_instance(s, obs, want_str(v, "gen_obj_mask"));
    return ref ? Value::of(*ref) : Value::none();
  }
};

struct OracleDetectRecep : Reactor {
  Value query(const std::vector<Value>&, const EnvSession& s) const override {
    Value::List out;
    for (const Detection& d : s.true_view().detections) {
      const ObjectInstance* obj = s.state.find(d.id);
      if (obj && obj->attrs.is_receptacle)
        out.push_back(Value::of(ObjRef{d.id, d.class_name}));
    }
    return Value::of(std::move(out));
  }
};

struct OracleFindAll : Reactor {
  Value query(const std::vector<Value>& args, const EnvSession& s) const override {
    std::string name = name_of(arg_at(args, 0, "find_all_obj"), "find_all_obj");
    Value::List out;
    if (is_receptacle_name(s, name)) {
      auto id = resolve_instance(s, Value::of(name));
      if (id)
        for (const std::string& inner : s.state.contents_of(*id))
          out.push_back(Value::of(ObjRef{inner, s.state.find(inner)->class_name}));
    } else {
      std::string cls = name;
      if (const ObjectInstance* obj = s.state.find(name)) cls = obj->class_name;
      for (const auto& [id, obj] : s.state.objects)
        if (obj.class_name == cls) out.push_back(Value::of(ObjRef{id, cls}));
    }
    return Value::of(std::move(out));
  }
};

struct OracleFindRecep : Reactor {
  Value query(const std::vector<Value>& args, const EnvSession& s) const override {
    auto id = resolve_instance(s, arg_at(args, 0, "find_recep"));
    if (!id) return Value::none();
    const ObjectInstance* obj = s.state.find(*id);
    if (obj->location.kind != ObjectLocation::Kind::in_receptacle) return Value::none();
    const std::string& rid = obj->location.receptacle_id;
    return Value::of(ObjRef{rid, s.state.find(rid)->class_name});
  }
};

struct OracleAttr : Reactor {
  Value query(const std::vector<Value>& args, const EnvSession& s) const override {
    auto id = resolve_instance(s, arg_at(args, 0, "check_obj_attr"));
    std::string attr = want_str(arg_at(args, 1, "check_obj_attr"), "check_obj_attr");
    if (!id)
      throw std::runtime_error("check_obj_attr: cannot resolve " +
                               arg_at(args, 0, "check_obj_attr").show());
    const ObjectAttrs& a = s.state.find(*id)->attrs;
    if (attr == "openable") return Value::of(a.openable);
    if (attr == "is_open") return Value::of(a.is_open);
    if (attr == "toggleable") return Value::of(a.toggleable);
    if (attr == "is_on") return Value::of(a.is_on);
    if (attr == "pickupable") return Value::of(a.pickupable);
    if (attr == "sliceable") return Value::of(a.sliceable);
    if (attr == "is_sliced") return Value::of(a.is_sliced);
    if (attr == "is_clean") return Value::of(a.is_clean);
    if (attr == "is_hot") return Value::of(a.temperature == Temperature::hot);
    if (attr == "is_cold") return Value::of(a.temperature == Temperature::cold);
    // Redundant with openable + is_open, kept because the attribute bundle
    // reports all three flags.
    if (attr == "is_closed") return Value::of(a.openable && !a.is_open);
    throw std::runtime_error("check_obj_attr: unknown attribute " + attr);
  }
};

Value rel_answer(bool in) {
  return Value::of(std::string(in ? kRelInRecep : kRelNotIn));
}

struct OracleRel : Reactor {
  Value query(const std::vector<Value>& args, const EnvSession& s) const override {
    const Value& ov = arg_at(args, 0, "check_obj_recep_rel");
    auto recep = resolve_instance(s, arg_at(args, 1, "check_obj_recep_rel"));
    if (!recep) return rel_answer(false);
    // A class name asks "is any instance of this class in there"; an id or
    // ref asks about that one instance.
    if (ov.is_str() && !s.state.find(ov.as_str()) && known_class(ov.as_str())) {
      for (const std::string& inner : s.state.contents_of(*recep))
        if (s.state.find(inner)->class_name == ov.as_str()) return rel_answer(true);
      return rel_answer(false);
    }
    auto obj = resolve_instance(s, ov);
    if (!obj) return rel_answer(false);
    const ObjectInstance* o = s.state.find(*obj);
    return rel_answer(o->location.kind == ObjectLocation::Kind::in_receptacle &&
                      o->location.receptacle_id == *recep);
  }
};

// --- heuristic reactors -----------------------------------------------------

// Scan-time class of an id; static knowledge, never affected by noise.
std::string scanned_class(const EnvSession& s, const std::string& id) {
  const ObjectInstance* obj = s.state.find(id);
  return obj ? obj->class_name : id;
}

// Untouched-first resolution against believed locations instead of ground
// truth: distance is measured to the believed container's pre-searched pose.
std::optional<std::string> believe_instance(const EnvSession& s, const std::string& name) {
  if (s.map->movable.count(name) || s.map->receptacle_pose.count(name)) return name;
  // Receptacles and fixtures were posed during the scan; a class name picks
  // the first scanned instance.
  for (const auto& kv : s.map->receptacle_pose)
    if (scanned_class(s, kv.first) == name) return kv.first;
  std::map<std::string, std::string> loc = believed_locations(s);
  std::optional<std::string> best;
  bool best_untouched = false;
  double best_dist = 0;
  for (const auto& [id, where] : loc) {
    if (scanned_class(s, id) != name) continue;
    double dist = 1e9;
    if (!where.empty()) {
      if (auto pose = s.map->pose_of(where))
        dist = std::hypot(pose->cell.x - s.state.agent.cell.x,
                          pose->cell.y - s.state.agent.cell.y);
    } else {
      dist = 0;  // in hand
    }
    bool untouched = !s.touched.count(id);
    bool better;
    if (!best) {
      better = true;
    } else if (untouched != best_untouched) {
      better = untouched;
    } else if (std::abs(dist - best_dist) > 1e-9) {
      better = dist < best_dist;
    } else {
      better = false;
    }
    if (better) {
      best = id;
      best_untouched = untouched;
      best_dist = dist;
    }
  }
  return best;
}

struct HeurMask : Reactor {
  Value query(const std::vector<Value>& args, const EnvSession& s) const override {
    const Value& v = arg_at(args, 0, "gen_obj_mask");
    Observation obs = s.view();
    if (v.is_obj()) {
      for (const Detection& d : obs.detections)
        if (d.id == v.as_obj().id) return Value::of(ObjRef{d.id, d.class_name});
      return Value::none();
    }
    auto ref = mask_instance(s, obs, want_str(v, "gen_obj_mask"));
    return ref ? Value::of(*ref) : Value::none();
  }
};

struct HeurDetectRecep : Reactor {
  Value query(const std::vector<Value>&, const EnvSession& s) const override {
    Value::List out;
    for (const Detection& d : s.view().detections)
      if (known_class(d.class_name) && class_info(d.class_name).is_receptacle)
        out.push_back(Value::of(ObjRef{d.id, d.class_name}));
    return Value::of(std::move(out));
  }
};

struct HeurFindAll : Reactor {
  Value query(const std::vector<Value>& args, const EnvSession& s) const override {
    std::string name = name_of(arg_at(args, 0, "find_all_obj"), "find_all_obj");
    Value::List out;
    std::map<std::string, std::string> loc = believed_locations(s);
    if (is_receptacle_name(s, name)) {
      std::optional<std::string> rid = believe_instance(s, name);
      if (rid)
        for (const auto& [id, where] : loc)
          if (where == *rid) out.push_back(Value::of(ObjRef{id, scanned_class(s, id)}));
    } else {
      std::string cls = s.map->movable.count(name) ? scanned_class(s, name) : name;
      for (const auto& [id, where] : loc)
        if (scanned_class(s, id) == cls)
          out.push_back(Value::of(ObjRef{id, cls}));
      for (const auto& [id, pose] : s.map->receptacle_pose)
        if (scanned_class(s, id) == cls)
          out.push_back(Value::of(ObjRef{id, cls}));
    }
    return Value::of(std::move(out));
  }
};

struct HeurFindRecep : Reactor {
  Value query(const std::vector<Value>& args, const EnvSession& s) const override {
    std::string name = name_of(arg_at(args, 0, "find_recep"), "find_recep");
    auto id = believe_instance(s, name);
    if (!id) return Value::none();
    std::map<std::string, std::string> loc = believed_locations(s);
    auto it = loc.find(*id);
    if (it == loc.end() || it->second.empty()) return Value::none();
    return Value::of(ObjRef{it->second, scanned_class(s, it->second)});
  }
};

struct HeurAttr : Reactor {
  Value query(const std::vector<Value>& args, const EnvSession& s) const override {
    const Value& target = arg_at(args, 0, "check_obj_attr");
    std::string attr = want_str(arg_at(args, 1, "check_obj_attr"), "check_obj_attr");

    // The class answers static capability questions; the reported (possibly
    // wrong) label is trusted.
    std::string cls;
    std::optional<std::string> id;
    if (target.is_obj()) {
      cls = target.as_obj().cls;
      id = target.as_obj().id;
    } else {
      std::string name = want_str(target, "check_obj_attr");
      if (known_class(name) && !s.state.find(name)) {
        cls = name;
        id = believe_instance(s, name);
      } else {
        id = name;
        cls = scanned_class(s, name);
      }
    }
    if (!known_class(cls))
      throw std::runtime_error("check_obj_attr: unknown class " + cls);
    const ClassInfo& info = class_info(cls);
    if (attr == "openable") return Value::of(info.openable);
    if (attr == "toggleable") return Value::of(info.toggleable);
    if (attr == "pickupable") return Value::of(info.pickupable);
    if (attr == "sliceable") return Value::of(info.sliceable);

    // Dynamic attributes replay the step log; no observation, no ground
    // truth. Unknown history means the closed / off / untreated default.
    bool is_open = false, is_on = false, sliced = false, clean = false;
    bool hot = false, cold = false;
    if (id) {
      for (const StepLogEntry& e : s.step_log) {
        if (!e.ok) continue;
        if (e.action.obj == *id) {
          if (e.action.kind == ActionKind::open) is_open = true;
          if (e.action.kind == ActionKind::close) is_open = false;
          if (e.action.kind == ActionKind::toggle_on) is_on = true;
          if (e.action.kind == ActionKind::toggle_off) is_on = false;
        }
        for (const WorldEvent& ev : e.events) {
          if (ev.obj_id != *id) continue;
          if (ev.what == "sliced") sliced = true;
          if (ev.what == "cleaned") clean = true;
          if (ev.what == "heated") hot = true, cold = false;
          if (ev.what == "cooled") cold = true, hot = false;
        }
      }
    }
    if (attr == "is_open") return Value::of(is_open);
    if (attr == "is_closed") return Value::of(info.openable && !is_open);
    if (attr == "is_on") return Value::of(is_on);
    if (attr == "is_sliced") return Value::of(sliced);
    if (attr == "is_clean") return Value::of(clean);
    if (attr == "is_hot") return Value::of(hot);
    if (attr == "is_cold") return Value::of(cold);
    throw std::runtime_error("check_obj_attr: unknown attribute " + attr);
  }
};

struct HeurRel : Reactor {
  Value query(const std::vector<Value>& args, const EnvSession& s) const override {
    Observation obs = s.view();
    auto box_of = [&](const Value& v) -> std::optional<BBox> {
      std::string key = name_of(v, "check_obj_recep_rel");
      if (v.is_obj()) {
        for (const Detection& d : obs.detections)
          if (d.id == key) return d.bbox;
        return std::nullopt;
      }
      auto ref = mask_instance(s, obs, key);
      if (!ref) return std::nullopt;
      for (const Detection& d : obs.detections)
        if (d.id == ref->id) return d.bbox;
      return std::nullopt;
    };
    auto obj = box_of(arg_at(args, 0, "check_obj_recep_rel"));
    auto recep = box_of(arg_at(args, 1, "check_obj_recep_rel"));
    if (!obj || !recep) return rel_answer(false);
    return rel_answer(rel_from_boxes(*obj, *recep));
  }
};

}  // namespace

ReactorRegistry oracle_registry() {
  ReactorRegistry reg;
  auto find_recep = std::make_shared<OracleFindRecep>();
  reg.add("gen_obj_mask", std::make_shared<OracleMask>());
  reg.add("detect_recep", std::make_shared<OracleDetectRecep>());
  reg.add("find_all_obj", std::make_shared<OracleFindAll>());
  reg.add("find_recep", find_recep);
  reg.add("find_obj_recep", find_recep);
  reg.add("check_obj_attr", std::make_shared<OracleAttr>());
  reg.add("check_obj_recep_rel", std::make_shared<OracleRel>());
  return reg;
}

ReactorRegistry heuristic_registry() {
  ReactorRegistry reg;
  auto find_recep = std::make_shared<HeurFindRecep>();
  reg.add("gen_obj_mask", std::make_shared<HeurMask>());
  reg.add("detect_recep", std::make_shared<HeurDetectRecep>());
  reg.add("find_all_obj", std::make_shared<HeurFindAll>());
  reg.add("find_recep", find_recep);
  reg.add("find_obj_recep", find_recep);
  reg.add("check_obj_attr", std::make_shared<HeurAttr>());
  reg.add("check_obj_recep_rel", std::make_shared<HeurRel>());
  return reg;
}

}  // namespace pap::interp
