#include "pap/dsl/ast.hpp"

namespace pap::dsl {

const char* binop_name(BinOp op) {
  switch (op) {
    case BinOp::logical_or: return "or";
    case BinOp::logical_and: return "and";
    case BinOp::eq: return "==";
    case BinOp::ne: return "!=";
    case BinOp::membership: return "in";
    case BinOp::add: return "+";
  }
  return "?";
}

const char* unop_name(UnOp op) {
  switch (op) {
    case UnOp::logical_not: return "not";
    case UnOp::negate: return "-";
  }
  return "?";
}

ExprPtr clone(const Expr& e) {
  auto out = std::make_unique<Expr>();
  out->kind = e.kind;
  out->int_val = e.int_val;
  out->bool_val = e.bool_val;
  out->name = e.name;
  out->bin = e.bin;
  out->un = e.un;
  out->line = e.line;
  out->col = e.col;
  for (const ExprPtr& k : e.kids) out->kids.push_back(clone(*k));
  return out;
}

bool equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind || a.kids.size() != b.kids.size()) return false;
  switch (a.kind) {
    case Expr::Kind::int_lit:
      if (a.int_val != b.int_val) return false;
      break;
    case Expr::Kind::bool_lit:
      if (a.bool_val != b.bool_val) return false;
      break;
    case Expr::Kind::unary:
      if (a.un != b.un) return false;
      break;
    case Expr::Kind::binary:
      if (a.bin != b.bin) return false;
      break;
    default:
      if (a.name != b.name) return false;
      break;
  }
  for (size_t i = 0; i < a.kids.size(); ++i)
    if (!equal(*a.kids[i], *b.kids[i])) return false;
  return true;
}

Block clone(const Block& b) {
  Block out;
  for (const StmtPtr& s : b.stmts) {
    auto c = std::make_unique<Stmt>();
    c->kind = s->kind;
    c->id = s->id;
    c->name = s->name;
    c->reactor = s->reactor;
    for (const ExprPtr& a : s->args) c->args.push_back(clone(*a));
    if (s->value) c->value = clone(*s->value);
    c->body = clone(s->body);
    c->else_body = clone(s->else_body);
    c->line = s->line;
    c->col = s->col;
    out.stmts.push_back(std::move(c));
  }
  return out;
}

bool equal(const Stmt& a, const Stmt& b) {
  if (a.kind != b.kind || a.name != b.name || a.reactor != b.reactor) return false;
  if (a.args.size() != b.args.size()) return false;
  for (size_t i = 0; i < a.args.size(); ++i)
    if (!equal(*a.args[i], *b.args[i])) return false;
  if ((a.value == nullptr) != (b.value == nullptr)) return false;
  if (a.value && !equal(*a.value, *b.value)) return false;
  return equal(a.body, b.body) && equal(a.else_body, b.else_body);
}

bool equal(const Block& a, const Block& b) {
  if (a.stmts.size() != b.stmts.size()) return false;
  for (size_t i = 0; i < a.stmts.size(); ++i)
    if (!equal(*a.stmts[i], *b.stmts[i])) return false;
  return true;
}

const Procedure* Program::find(const std::string& name) const {
  for (const Procedure& p : procs)
    if (p.name == name) return &p;
  return nullptr;
}

Procedure clone(const Procedure& p) {
  Procedure out;
  out.name = p.name;
  out.params = p.params;
  out.body = clone(p.body);
  out.line = p.line;
  return out;
}

Program clone(const Program& p) {
  Program out;
  for (const Procedure& proc : p.procs) out.procs.push_back(clone(proc));
  return out;
}

bool equal(const Procedure& a, const Procedure& b) {
  return a.name == b.name && a.params == b.params && equal(a.body, b.body);
}

bool equal(const Program& a, const Program& b) {
  if (a.procs.size() != b.procs.size()) return false;
  for (size_t i = 0; i < a.procs.size(); ++i)
    if (!equal(a.procs[i], b.procs[i])) return false;
  return true;
}

}  // namespace pap::dsl
