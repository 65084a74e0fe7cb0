#include "pap/interp/interpreter.hpp"

#include <stdexcept>

#include "pap/world_json.hpp"

namespace pap::interp {

Json ae_to_json(const ExecutableProcedure& ae) {
  Json arr = Json::array();
  for (const CallEntry& c : ae) {
    Json j;
    j["name"] = c.name;
    Json args = Json::array();
    for (const Value& v : c.args) args.push_back(value_to_json(v));
    j["args"] = args;
    j["atomic"] = c.atomic;
    arr.push_back(j);
  }
  return arr;
}

ExecutableProcedure ae_from_json(const Json& j) {
  ExecutableProcedure ae;
  for (const Json& e : j) {
    CallEntry c;
    c.name = e.at("name");
    for (const Json& a : e.at("args")) c.args.push_back(value_from_json(a));
    c.atomic = e.at("atomic");
    ae.push_back(std::move(c));
  }
  return ae;
}

std::string signature_of(const ExecutableProcedure& ae) {
  std::string sig;
  for (const CallEntry& c : ae) {
    if (!sig.empty()) sig += ';';
    sig += c.atomic ? "atomic_" + c.name : c.name;
    sig += '(';
    for (size_t i = 0; i < c.args.size(); ++i) {
      if (i) sig += ',';
      const Value& v = c.args[i];
      if (v.is_str()) sig += v.as_str();
      else if (v.is_obj()) sig += v.as_obj().cls;
      else if (v.is_int()) sig += "int";
      else sig += v.type_name();
    }
    sig += ')';
  }
  return sig;
}

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::success: return "success";
    case Outcome::failed_action: return "failed_action";
    case Outcome::budget_exceeded: return "budget_exceeded";
    case Outcome::runtime_fault: return "runtime_fault";
  }
  return "?";
}

namespace {

// Unwind signals. Private to the machine; interpret() turns them into
// outcomes, so no caller ever sees these types.
struct FailedActionSignal {};
struct BudgetSignal {};
struct FaultSignal {
  std::string message;
};

const char* event_kind_name(TraceEvent::Kind k) {
  switch (k) {
    case TraceEvent::Kind::proc_enter: return "proc_enter";
    case TraceEvent::Kind::proc_exit: return "proc_exit";
    case TraceEvent::Kind::atomic_issued: return "atomic";
    case TraceEvent::Kind::reactor_queried: return "reactor";
    case TraceEvent::Kind::branch: return "branch";
    case TraceEvent::Kind::loop_iter: return "loop";
    case TraceEvent::Kind::fault: return "fault";
  }
  return "?";
}

class Machine {
 public:
  Machine(const dsl::Program& lib, EnvSession& session, const ReactorRegistry& reg,
          const InterpLimits& lim, ExecutionTrace& trace)
      : lib_(lib), session_(session), reg_(reg), lim_(lim), trace_(trace) {
    bind_globals();
  }

  Value run_entry(const CallEntry& entry) {
    if (entry.atomic) {
      issue_atomic(entry.name, entry.args, 0);
      return Value::none();
    }
    return call_proc(entry.name, entry.args);
  }

 private:
  const dsl::Program& lib_;
  EnvSession& session_;
  const ReactorRegistry& reg_;
  const InterpLimits& lim_;
  ExecutionTrace& trace_;

  struct Frame {
    std::map<std::string, Value> vars;
    Value ret;
    bool returned = false;
  };
  std::vector<Frame> stack_;
  std::map<std::string, Value> globals_;
  int issued_ = 0;

  void bind_globals() {
    for (const char* cls : {"fridge", "knife", "microwave", "sink", "faucet"}) {
      Value bound = Value::none();
      for (const auto& [id, obj] : session_.state.objects)
        if (obj.class_name == cls) {
          bound = Value::of(ObjRef{id, obj.class_name});
          break;  // ids sort, so this is the first instance
        }
      globals_[cls] = bound;
    }
    Value::List cells;
    for (const Cell& c : session_.map->reachable_cells)
      cells.push_back(Value::of(PosVal{c.x, c.y}));
    globals_["reachable_pos"] = Value::of(std::move(cells));
  }

  [[noreturn]] void fault(const std::string& msg) { throw FaultSignal{msg}; }

  void record(TraceEvent e) {
    trace_.events.push_back(std::move(e));
    if (static_cast<int>(trace_.events.size()) > lim_.max_events) throw BudgetSignal{};
  }

  Frame& frame() { return stack_.back(); }

  Value lookup(const std::string& name) {
    if (!stack_.empty()) {
      auto it = frame().vars.find(name);
      if (it != frame().vars.end()) return it->second;
    }
    auto git = globals_.find(name);
    if (git != globals_.end()) return git->second;
    fault("unbound variable: " + name);
  }

  Value call_proc(const std::string& name, const std::vector<Value>& args) {
    const dsl::Procedure* proc = lib_.find(name);
    if (!proc) fault("unknown procedure: " + name);
    if (proc->params.size() != args.size())
      fault(name + " expects " + std::to_string(proc->params.size()) +
            " argument(s), got " + std::to_string(args.size()));
    if (static_cast<int>(stack_.size()) >= lim_.max_depth)
      fault("call depth limit exceeded in " + name);

    Json detail;
    Json ja = Json::array();
    for (const Value& v : args) ja.push_back(value_to_json(v));
    detail["args"] = ja;
    record({TraceEvent::Kind::proc_enter, name, 0, detail});

    stack_.emplace_back();
    for (size_t i = 0; i < args.size(); ++i) frame().vars[proc->params[i]] = args[i];
    run_block(proc->body);
    Value ret = frame().ret;
    stack_.pop_back();

    Json exit_detail;
    exit_detail["result"] = value_to_json(ret);
    record({TraceEvent::Kind::proc_exit, name, 0, exit_detail});
    return ret;
  }

  void run_block(const dsl::Block& b) {
    for (const dsl::StmtPtr& s : b.stmts) {
      exec(*s);
      if (frame().returned) return;
    }
  }

  void exec(const dsl::Stmt& s) {
    using K = dsl::Stmt::Kind;
    switch (s.kind) {
      case K::atomic_call: {
        std::vector<Value> args;
        for (const dsl::ExprPtr& a : s.args) args.push_back(eval(*a));
        issue_atomic(s.name, args, s.id);
        break;
      }
      case K::proc_call: {
        std::vector<Value> args;
        for (const dsl::ExprPtr& a : s.args) args.push_back(eval(*a));
        call_proc(s.name, args);
        break;
      }
      case K::reactor_bind:
        frame().vars[s.name] = Value::of(ReactorHandle{s.reactor});
        break;
      case K::let:
        frame().vars[s.name] = eval(*s.value);
        break;
      case K::assign: {
        auto it = frame().vars.find(s.name);
        if (it == frame().vars.end()) fault("assignment to unbound variable: " + s.name);
        it->second = eval(*s.value);
        break;
      }
      case K::if_stmt: {
        Value cond = eval(*s.value);
        if (!cond.is_bool()) fault("condition is not a bool: " + cond.show());
        Json detail;
        detail["taken"] = cond.as_bool();
        record({TraceEvent::Kind::branch, "", s.id, detail});
        run_block(cond.as_bool() ? s.body : s.else_body);
        break;
      }
      case K::for_stmt: {
        Value iter = eval(*s.value);
        if (!iter.is_list()) fault("for needs a list, got " + iter.type_name());
        Value::List items = iter.as_list();  // snapshot; rebinding cannot shift it
        int index = 0;
        for (const Value& item : items) {
          Json detail;
          detail["index"] = index++;
          record({TraceEvent::Kind::loop_iter, s.name, s.id, detail});
          frame().vars[s.name] = item;
          run_block(s.body);
          if (frame().returned) return;
        }
        break;
      }
      case K::while_stmt: {
        int index = 0;
        while (true) {
          Value cond = eval(*s.value);
          if (!cond.is_bool()) fault("condition is not a bool: " + cond.show());
          if (!cond.as_bool()) break;
          Json detail;
          detail["index"] = index++;
          record({TraceEvent::Kind::loop_iter, "", s.id, detail});
          run_block(s.body);
          if (frame().returned) return;
        }
        break;
      }
      case K::ret:
        frame().ret = s.value ? eval(*s.value) : Value::none();
        frame().returned = true;
        break;
    }
  }

  Value eval(const dsl::Expr& e) {
    using K = dsl::Expr::Kind;
    switch (e.kind) {
      case K::int_lit: return Value::of(e.int_val);
      case K::str_lit: return Value::of(e.name);
      case K::bool_lit: return Value::of(e.bool_val);
      case K::enum_lit:
        // NONE is the null literal; other symbols are opaque strings that
        // only support equality.
        if (e.name == "NONE") return Value::none();
        return Value::of("#" + e.name);
      case K::var: return lookup(e.name);
      case K::attr: return attr_of(eval(*e.kids[0]), e.name);
      case K::list: {
        Value::List xs;
        for (const dsl::ExprPtr& k : e.kids) xs.push_back(eval(*k));
        return Value::of(std::move(xs));
      }
      case K::unary: {
        Value v = eval(*e.kids[0]);
        if (e.un == dsl::UnOp::logical_not) {
          if (!v.is_bool()) fault("not needs a bool, got " + v.type_name());
          return Value::of(!v.as_bool());
        }
        if (!v.is_int()) fault("negation needs an int, got " + v.type_name());
        return Value::of(-v.as_int());
      }
      case K::binary: return binary(e);
      case K::call: {
        std::vector<Value> args;
        for (const dsl::ExprPtr& k : e.kids) args.push_back(eval(*k));
        return call_value(e.name, args, e.line);
      }
    }
    fault("unreachable expression kind");
  }

  Value attr_of(const Value& base, const std::string& name) {
    if (base.is_obj()) {
      if (name == "id") return Value::of(base.as_obj().id);
      if (name == "cls") return Value::of(base.as_obj().cls);
    }
    if (base.is_pos()) {
      if (name == "x") return Value::of(static_cast<int64_t>(base.as_pos().x));
      if (name == "y") return Value::of(static_cast<int64_t>(base.as_pos().y));
    }
    fault("no attribute ." + name + " on " + base.type_name());
  }

  Value binary(const dsl::Expr& e) {
    using B = dsl::BinOp;
    if (e.bin == B::logical_or || e.bin == B::logical_and) {
      Value l = eval(*e.kids[0]);
      if (!l.is_bool()) fault("logical operand is not a bool: " + l.show());
      // Short-circuit, so guard patterns like `found and found == x` work.
      if (e.bin == B::logical_or && l.as_bool()) return Value::of(true);
      if (e.bin == B::logical_and && !l.as_bool()) return Value::of(false);
      Value r = eval(*e.kids[1]);
      if (!r.is_bool()) fault("logical operand is not a bool: " + r.show());
      return r;
    }
    Value l = eval(*e.kids[0]);
    Value r = eval(*e.kids[1]);
    switch (e.bin) {
      case B::eq: return Value::of(l == r);
      case B::ne: return Value::of(l != r);
      case B::membership: {
        if (!r.is_list()) fault("in needs a list on the right, got " + r.type_name());
        for (const Value& x : r.as_list())
          if (x == l) return Value::of(true);
        return Value::of(false);
      }
      case B::add:
        if (l.is_int() && r.is_int()) return Value::of(l.as_int() + r.as_int());
        if (l.is_list() && r.is_list()) {
          Value::List xs = l.as_list();
          for (const Value& x : r.as_list()) xs.push_back(x);
          return Value::of(std::move(xs));
        }
        fault("+ needs two ints or two lists, got " + l.type_name() + " and " +
              r.type_name());
      default:
        fault("unreachable operator");
    }
  }

  Value call_value(const std::string& name, const std::vector<Value>& args, int line) {
    // Reactor-bound variables shadow procedures.
    if (!stack_.empty()) {
      auto it = frame().vars.find(name);
      if (it != frame().vars.end()) {
        if (!it->second.is_reactor())
          fault(name + " is not callable (line " + std::to_string(line) + ")");
        return query_reactor(it->second.as_reactor().name, args, false);
      }
    }
    if (lib_.find(name)) return call_proc(name, args);
    fault("unknown callee: " + name);
  }

  Value query_reactor(const std::string& name, const std::vector<Value>& args,
                      bool implicit) {
    Value result;
    try {
      result = reg_.query(name, args, session_);
    } catch (const std::exception& ex) {
      fault(std::string("reactor ") + name + ": " + ex.what());
    }
    Json detail;
    Json ja = Json::array();
    for (const Value& v : args) ja.push_back(value_to_json(v));
    detail["args"] = ja;
    detail["result"] = value_to_json(result);
    if (implicit) detail["implicit"] = true;
    record({TraceEvent::Kind::reactor_queried, name, 0, detail});
    return result;
  }

  // --- grounding of atomic arguments ---------------------------------------

  int64_t want_int(const Value& v, const char* what) {
    if (!v.is_int()) fault(std::string(what) + " needs an int, got " + v.type_name());
    return v.as_int();
  }

  // Interaction targets must be in view; class names go through the mask
  // reactor. Returns the id, or nothing (after logging a failed action).
  std::optional<std::string> ground_interaction(const std::string& action,
                                                const Value& v) {
    if (v.is_obj()) return v.as_obj().id;
    if (v.is_none()) fault(action + " on NONE");
    if (!v.is_str()) fault(action + " target has type " + v.type_name());
    const std::string& name = v.as_str();
    if (session_.state.find(name)) return name;
    Value masked = query_reactor("gen_obj_mask", {v}, true);
    if (masked.is_obj()) return masked.as_obj().id;
    return std::nullopt;
  }

  void issue_atomic(const std::string& name, const std::vector<Value>& args, int stmt_id) {
    auto kind = pap::action_kind_from_name(name);
    if (!kind) fault("unknown atomic action: " + name);
    if (args.size() != pap::action_arity(*kind))
      fault("atomic " + name + " arity mismatch");

    if (issued_ >= lim_.max_atomics) throw BudgetSignal{};
    ++issued_;

    AtomicAction a;
    a.kind = *kind;
    std::optional<ActionError> ground_error;
    switch (*kind) {
      case ActionKind::stop:
        break;
      case ActionKind::navigate: {
        const Value& v = args[0];
        if (v.is_obj()) {
          a.obj = v.as_obj().id;
        } else if (v.is_str()) {
          auto id = resolve_instance(session_, v);
          if (id) a.obj = *id;
          else {
            a.obj = v.as_str();
            ground_error = ActionError{ActionErrorKind::unknown_id,
                                       "cannot resolve " + v.as_str()};
          }
        } else {
          fault("navigate target has type " + v.type_name());
        }
        break;
      }
      case ActionKind::navigate_pos:
        a.cell = {static_cast<int>(want_int(args[0], "navigate_pos")),
                  static_cast<int>(want_int(args[1], "navigate_pos"))};
        break;
      case ActionKind::rotate_to:
        a.rotation = static_cast<int>(want_int(args[0], "rotate_to"));
        break;
      case ActionKind::look_to:
        a.horizon = static_cast<int>(want_int(args[0], "look_to"));
        break;
      case ActionKind::put: {
        const Value& ov = args[0];
        if (ov.is_obj()) {
          a.obj = ov.as_obj().id;
        } else if (ov.is_str()) {
          // The object should already be in hand; match by class first.
          const std::string& cls = ov.as_str();
          if (session_.state.inventory &&
              session_.state.find(*session_.state.inventory)->class_name == cls) {
            a.obj = *session_.state.inventory;
          } else if (session_.state.find(cls)) {
            a.obj = cls;
          } else if (auto id = ground_interaction(name, ov)) {
            a.obj = *id;
          } else {
            a.obj = cls;
            ground_error = ActionError{ActionErrorKind::not_visible,
                                       "no mask for " + cls};
          }
        } else {
          fault("put object has type " + ov.type_name());
        }
        if (!ground_error) {
          if (auto rid = ground_interaction(name, args[1])) {
            a.recep = *rid;
          } else {
            a.recep = args[1].is_str() ? args[1].as_str() : "?";
            ground_error = ActionError{ActionErrorKind::not_visible,
                                       "no mask for " + a.recep};
          }
        }
        break;
      }
      default: {  // open/close/pickup/toggle_on/toggle_off/slice
        if (auto id = ground_interaction(name, args[0])) {
          a.obj = *id;
        } else {
          a.obj = args[0].is_str() ? args[0].as_str() : "?";
          ground_error = ActionError{ActionErrorKind::not_visible,
                                     "no mask for " + a.obj};
        }
        break;
      }
    }

    StepResult r = ground_error ? session_.issue_failed(a, *ground_error)
                                : session_.issue(a);
    Json detail;
    detail["action"] = describe(a);
    detail["ok"] = r.ok;
    if (!r.ok) {
      detail["error"] = error_name(r.error.kind);
      detail["message"] = r.error.message;
    }
    trace_.atomics.push_back(a);
    trace_.atomic_ok.push_back(r.ok);
    record({TraceEvent::Kind::atomic_issued, name, stmt_id, detail});
    if (!r.ok) throw FailedActionSignal{};
  }
};

}  // namespace

ExecutionTrace interpret(const dsl::Program& lib, const ExecutableProcedure& ae,
                         EnvSession& session, const ReactorRegistry& reg,
                         const InterpLimits& lim) {
  ExecutionTrace trace;
  Machine m(lib, session, reg, lim, trace);
  try {
    for (const CallEntry& entry : ae) trace.result = m.run_entry(entry);
  } catch (const FailedActionSignal&) {
    trace.outcome = Outcome::failed_action;
  } catch (const BudgetSignal&) {
    trace.outcome = Outcome::budget_exceeded;
  } catch (const FaultSignal& f) {
    trace.outcome = Outcome::runtime_fault;
    trace.fault = f.message;
    trace.events.push_back({TraceEvent::Kind::fault, "", 0, Json(f.message)});
  } catch (const std::exception& ex) {
    trace.outcome = Outcome::runtime_fault;
    trace.fault = ex.what();
    trace.events.push_back({TraceEvent::Kind::fault, "", 0, Json(ex.what())});
  }
  return trace;
}

std::vector<Json> trace_to_jsonl(const ExecutionTrace& t) {
  std::vector<Json> rows;
  Json head;
  head["format"] = "trace/1";
  head["outcome"] = outcome_name(t.outcome);
  if (!t.fault.empty()) head["fault"] = t.fault;
  head["result"] = value_to_json(t.result);
  head["atomics"] = t.atomics.size();
  rows.push_back(head);
  for (const TraceEvent& e : t.events) {
    Json row;
    row["e"] = event_kind_name(e.kind);
    if (!e.name.empty()) row["name"] = e.name;
    if (e.stmt_id) row["stmt"] = e.stmt_id;
    if (!e.detail.is_null()) row["detail"] = e.detail;
    rows.push_back(row);
  }
  return rows;
}

CanonicalForm canonicalize(const dsl::Program& lib, const ExecutableProcedure& ae,
                           const SceneState& start,
                           std::shared_ptr<const PresearchMap> map,
                           const InterpLimits& lim) {
  EnvSession session(start, std::move(map));
  ReactorRegistry reg = oracle_registry();
  ExecutionTrace t = interpret(lib, ae, session, reg, lim);
  CanonicalForm c;
  c.atomics = t.atomics;
  c.ok = t.atomic_ok;
  c.outcome = t.outcome;
  c.result = t.result;
  c.final_state = scene_dump(session.state);
  return c;
}

}  // namespace pap::interp
