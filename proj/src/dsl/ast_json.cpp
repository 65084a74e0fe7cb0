#include "pap/dsl/ast_json.hpp"

#include "pap/dsl/printer.hpp"

namespace pap::dsl {

namespace {

Json expr_to_json(const Expr& e) {
  Json j;
  switch (e.kind) {
    case Expr::Kind::int_lit:
      j["kind"] = "int";
      j["value"] = e.int_val;
      break;
    case Expr::Kind::str_lit:
      j["kind"] = "str";
      j["value"] = e.name;
      break;
    case Expr::Kind::bool_lit:
      j["kind"] = "bool";
      j["value"] = e.bool_val;
      break;
    case Expr::Kind::enum_lit:
      j["kind"] = "enum";
      j["value"] = e.name;
      break;
    case Expr::Kind::var:
      j["kind"] = "var";
      j["name"] = e.name;
      break;
    case Expr::Kind::attr:
      j["kind"] = "attr";
      j["name"] = e.name;
      j["base"] = expr_to_json(*e.kids[0]);
      break;
    case Expr::Kind::list: {
      j["kind"] = "list";
      Json items = Json::array();
      for (const ExprPtr& k : e.kids) items.push_back(expr_to_json(*k));
      j["items"] = items;
      break;
    }
    case Expr::Kind::unary:
      j["kind"] = "unary";
      j["op"] = unop_name(e.un);
      j["operand"] = expr_to_json(*e.kids[0]);
      break;
    case Expr::Kind::binary:
      j["kind"] = "binary";
      j["op"] = binop_name(e.bin);
      j["lhs"] = expr_to_json(*e.kids[0]);
      j["rhs"] = expr_to_json(*e.kids[1]);
      break;
    case Expr::Kind::call: {
      j["kind"] = "call";
      j["name"] = e.name;
      Json args = Json::array();
      for (const ExprPtr& k : e.kids) args.push_back(expr_to_json(*k));
      j["args"] = args;
      break;
    }
  }
  return j;
}

Json block_to_json(const Block& b);

Json stmt_to_json(const Stmt& s) {
  Json j;
  j["id"] = s.id;
  switch (s.kind) {
    case Stmt::Kind::atomic_call:
    case Stmt::Kind::proc_call: {
      j["kind"] = s.kind == Stmt::Kind::atomic_call ? "atomic" : "call";
      j["name"] = s.name;
      Json args = Json::array();
      for (const ExprPtr& a : s.args) args.push_back(expr_to_json(*a));
      j["args"] = args;
      break;
    }
    case Stmt::Kind::reactor_bind:
      j["kind"] = "reactor_bind";
      j["name"] = s.name;
      j["reactor"] = s.reactor;
      break;
    case Stmt::Kind::let:
      j["kind"] = "let";
      j["name"] = s.name;
      j["value"] = expr_to_json(*s.value);
      break;
    case Stmt::Kind::assign:
      j["kind"] = "assign";
      j["name"] = s.name;
      j["value"] = expr_to_json(*s.value);
      break;
    case Stmt::Kind::if_stmt:
      j["kind"] = "if";
      j["cond"] = expr_to_json(*s.value);
      j["then"] = block_to_json(s.body);
      j["else"] = block_to_json(s.else_body);
      break;
    case Stmt::Kind::for_stmt:
      j["kind"] = "for";
      j["var"] = s.name;
      j["iterable"] = expr_to_json(*s.value);
      j["body"] = block_to_json(s.body);
      break;
    case Stmt::Kind::while_stmt:
      j["kind"] = "while";
      j["cond"] = expr_to_json(*s.value);
      j["body"] = block_to_json(s.body);
      break;
    case Stmt::Kind::ret:
      j["kind"] = "return";
      if (s.value) j["value"] = expr_to_json(*s.value);
      break;
  }
  return j;
}

Json block_to_json(const Block& b) {
  Json arr = Json::array();
  for (const StmtPtr& s : b.stmts) arr.push_back(stmt_to_json(*s));
  return arr;
}

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out;
}

void dot_block(const Block& b, const std::string& parent, int& next, std::string& out);

std::string stmt_label(const Stmt& s) {
  switch (s.kind) {
    case Stmt::Kind::atomic_call: return "atomic " + s.name;
    case Stmt::Kind::proc_call: return "call " + s.name;
    case Stmt::Kind::reactor_bind: return "let " + s.name + " = reactor " + s.reactor;
    case Stmt::Kind::let: return "let " + s.name + " = " + to_source(*s.value);
    case Stmt::Kind::assign: return s.name + " = " + to_source(*s.value);
    case Stmt::Kind::if_stmt: return "if " + to_source(*s.value);
    case Stmt::Kind::for_stmt: return "for " + s.name + " in " + to_source(*s.value);
    case Stmt::Kind::while_stmt: return "while " + to_source(*s.value);
    case Stmt::Kind::ret: return s.value ? "return " + to_source(*s.value) : "return";
  }
  return "?";
}

void dot_stmt(const Stmt& s, const std::string& parent, int& next, std::string& out) {
  std::string node = "n" + std::to_string(next++);
  out += "  " + node + " [label=\"" + dot_escape(stmt_label(s)) + "\"];\n";
  out += "  " + parent + " -> " + node + ";\n";
  if (s.kind == Stmt::Kind::if_stmt) {
    dot_block(s.body, node, next, out);
    if (!s.else_body.stmts.empty()) {
      std::string alt = "n" + std::to_string(next++);
      out += "  " + alt + " [label=\"else\"];\n";
      out += "  " + node + " -> " + alt + ";\n";
      dot_block(s.else_body, alt, next, out);
    }
  } else {
    dot_block(s.body, node, next, out);
  }
}

void dot_block(const Block& b, const std::string& parent, int& next, std::string& out) {
  for (const StmtPtr& s : b.stmts) dot_stmt(*s, parent, next, out);
}

}  // namespace

Json ast_to_json(const Program& p) {
  Json j;
  j["format"] = "ast/1";
  Json procs = Json::array();
  for (const Procedure& proc : p.procs) {
    Json pj;
    pj["name"] = proc.name;
    pj["params"] = proc.params;
    pj["body"] = block_to_json(proc.body);
    procs.push_back(pj);
  }
  j["procs"] = procs;
  return j;
}

std::string ast_to_dot(const Program& p) {
  std::string out = "digraph ast {\n  node [shape=box, fontname=\"monospace\"];\n";
  int next = 0;
  for (const Procedure& proc : p.procs) {
    std::string root = "n" + std::to_string(next++);
    std::string params;
    for (size_t i = 0; i < proc.params.size(); ++i)
      params += (i ? ", " : "") + proc.params[i];
    out += "  " + root + " [label=\"proc " + dot_escape(proc.name + "(" + params + ")") +
           "\", shape=ellipse];\n";
    dot_block(proc.body, root, next, out);
  }
  out += "}\n";
  return out;
}

}  // namespace pap::dsl
