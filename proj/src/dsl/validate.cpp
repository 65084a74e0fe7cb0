#include "pap/dsl/validate.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "pap/world.hpp"

namespace pap::dsl {

const std::vector<std::string>& known_reactors() {
  static const std::vector<std::string> names = {
      "check_obj_attr",      // object attribute queries
      "check_obj_recep_rel", // visual containment test
      "find_recep",          // receptacle that held an object at scan time
      "find_obj_recep",      // alias of find_recep
      "find_all_obj",        // all scanned instances of a class
      "detect_recep",        // receptacle ids in the current view
      "gen_obj_mask",        // instance of a class in the current view
  };
  return names;
}

const std::vector<std::string>& scene_globals() {
  static const std::vector<std::string> names = {
      "fridge", "knife", "microwave", "sink", "faucet", "reachable_pos",
  };
  return names;
}

namespace {

class Checker {
 public:
  explicit Checker(const Program& program) : program_(program) {}

  std::vector<ValidateIssue> run() {
    std::set<std::string> seen;
    for (const Procedure& p : program_.procs) {
      if (p.name.rfind("udp_", 0) != 0)
        issue(p.name, p.line, "procedure name must start with udp_");
      if (!seen.insert(p.name).second)
        issue(p.name, p.line, "duplicate procedure name");
    }
    for (const Procedure& p : program_.procs) check_proc(p);
    return std::move(issues_);
  }

 private:
  const Program& program_;
  std::vector<ValidateIssue> issues_;
  std::string current_;
  std::set<std::string> vars_;          // bound names, flat per procedure
  std::set<std::string> reactor_vars_;  // subset bound by `reactor`

  void issue(const std::string& proc, int line, const std::string& msg) {
    issues_.push_back({proc, line, msg});
  }

  void here(int line, const std::string& msg) { issue(current_, line, msg); }

  void check_proc(const Procedure& p) {
    current_ = p.name;
    vars_.clear();
    reactor_vars_.clear();
    for (const std::string& g : scene_globals()) vars_.insert(g);
    std::set<std::string> params;
    for (const std::string& param : p.params) {
      if (!params.insert(param).second)
        issue(p.name, p.line, "duplicate parameter: " + param);
      vars_.insert(param);
    }
    check_block(p.body);
  }

  void check_block(const Block& b) {
    for (const StmtPtr& s : b.stmts) check_stmt(*s);
  }

  void check_stmt(const Stmt& s) {
    switch (s.kind) {
      case Stmt::Kind::atomic_call: {
        auto kind = pap::action_kind_from_name(s.name);
        if (!kind) {
          here(s.line, "unknown atomic action: " + s.name);
        } else if (s.args.size() != pap::action_arity(*kind)) {
          here(s.line, "atomic " + s.name + " expects " +
                           std::to_string(pap::action_arity(*kind)) + " argument(s), got " +
                           std::to_string(s.args.size()));
        }
        for (const ExprPtr& a : s.args) check_expr(*a, false);
        break;
      }
      case Stmt::Kind::proc_call: {
        check_callee(s.name, s.args.size(), s.line);
        for (const ExprPtr& a : s.args) check_expr(*a, false);
        break;
      }
      case Stmt::Kind::reactor_bind: {
        const auto& known = known_reactors();
        if (std::find(known.begin(), known.end(), s.reactor) == known.end())
          here(s.line, "unknown reactor: " + s.reactor);
        bind(s.name, s.line);
        reactor_vars_.insert(s.name);
        break;
      }
      case Stmt::Kind::let:
        check_expr(*s.value, false);
        bind(s.name, s.line);
        break;
      case Stmt::Kind::assign:
        check_expr(*s.value, false);
        if (!vars_.count(s.name))
          here(s.line, "assignment to undeclared variable: " + s.name);
        break;
      case Stmt::Kind::if_stmt:
        check_condition(*s.value, s.line);
        check_block(s.body);
        check_block(s.else_body);
        break;
      case Stmt::Kind::for_stmt:
        check_expr(*s.value, false);
        vars_.insert(s.name);  // loop variables may be reused freely
        check_block(s.body);
        break;
      case Stmt::Kind::while_stmt:
        check_condition(*s.value, s.line);
        check_block(s.body);
        break;
      case Stmt::Kind::ret:
        if (s.value) check_expr(*s.value, false);
        break;
    }
  }

  void bind(const std::string& name, int line) {
    if (!vars_.insert(name).second)
      here(line, "name already bound: " + name + " (use assignment)");
  }

  void check_callee(const std::string& name, size_t argc, int line) {
    if (reactor_vars_.count(name)) return;  // reactor arity is dynamic
    const Procedure* target = program_.find(name);
    if (!target) {
      here(line, "call of unknown procedure or reactor: " + name);
      return;
    }
    if (target->params.size() != argc)
      here(line, name + " expects " + std::to_string(target->params.size()) +
                     " argument(s), got " + std::to_string(argc));
  }

  // Conditions must be boolean-shaped and side-effect free: no reactor or
  // procedure calls hiding inside a branch decision.
  void check_condition(const Expr& e, int line) {
    if (contains_call(e))
      here(line, "conditions must not contain calls; bind the result first");
    switch (e.kind) {
      case Expr::Kind::bool_lit:
      case Expr::Kind::var:
      case Expr::Kind::attr:
        break;
      case Expr::Kind::unary:
        if (e.un != UnOp::logical_not) here(line, "condition is not boolean");
        break;
      case Expr::Kind::binary:
        if (e.bin == BinOp::add) here(line, "condition is not boolean");
        break;
      default:
        here(line, "condition is not boolean");
        break;
    }
    check_expr(e, true);
  }

  bool contains_call(const Expr& e) const {
    if (e.kind == Expr::Kind::call) return true;
    for (const ExprPtr& k : e.kids)
      if (contains_call(*k)) return true;
    return false;
  }

  void check_expr(const Expr& e, bool in_condition) {
    switch (e.kind) {
      case Expr::Kind::var:
        if (!vars_.count(e.name)) here(e.line, "use of undefined variable: " + e.name);
        break;
      case Expr::Kind::call:
        if (!in_condition) check_callee(e.name, e.kids.size(), e.line);
        for (const ExprPtr& k : e.kids) check_expr(*k, in_condition);
        break;
      default:
        for (const ExprPtr& k : e.kids) check_expr(*k, in_condition);
        break;
    }
  }
};

}  // namespace

std::vector<ValidateIssue> validate(const Program& p) { return Checker(p).run(); }

void validate_or_throw(const Program& p) {
  std::vector<ValidateIssue> issues = validate(p);
  if (issues.empty()) return;
  std::string msg = "program validation failed:";
  for (const ValidateIssue& i : issues)
    msg += "\n  " + i.proc + " (line " + std::to_string(i.line) + "): " + i.message;
  throw std::runtime_error(msg);
}

}  // namespace pap::dsl
