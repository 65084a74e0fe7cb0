#include "pap/dsl/printer.hpp"

namespace pap::dsl {

namespace {

// Precedence levels, matching the parser's grammar.
int precedence(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::binary:
      switch (e.bin) {
        case BinOp::logical_or: return 1;
        case BinOp::logical_and: return 2;
        case BinOp::eq:
        case BinOp::ne:
        case BinOp::membership: return 4;
        case BinOp::add: return 5;
      }
      return 0;
    case Expr::Kind::unary:
      return e.un == UnOp::logical_not ? 3 : 6;
    default:
      return 8;  // postfix and primaries never need parens
  }
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\\\"";
    else if (c == '\\') out += "\\\\";
    else if (c == '\n') out += "\\n";
    else out += c;
  }
  out += '"';
  return out;
}

void print_expr(const Expr& e, int min_prec, std::string& out) {
  int prec = precedence(e);
  bool parens = prec < min_prec;
  if (parens) out += '(';
  switch (e.kind) {
    case Expr::Kind::int_lit: out += std::to_string(e.int_val); break;
    case Expr::Kind::str_lit: out += quote(e.name); break;
    case Expr::Kind::bool_lit: out += e.bool_val ? "true" : "false"; break;
    case Expr::Kind::enum_lit:
    case Expr::Kind::var: out += e.name; break;
    case Expr::Kind::attr:
      print_expr(*e.kids[0], 7, out);
      out += '.';
      out += e.name;
      break;
    case Expr::Kind::list:
      out += '[';
      for (size_t i = 0; i < e.kids.size(); ++i) {
        if (i) out += ", ";
        print_expr(*e.kids[i], 0, out);
      }
      out += ']';
      break;
    case Expr::Kind::call:
      out += e.name;
      out += '(';
      for (size_t i = 0; i < e.kids.size(); ++i) {
        if (i) out += ", ";
        print_expr(*e.kids[i], 0, out);
      }
      out += ')';
      break;
    case Expr::Kind::unary:
      if (e.un == UnOp::logical_not) {
        out += "not ";
        print_expr(*e.kids[0], 3, out);
      } else {
        out += '-';
        print_expr(*e.kids[0], 6, out);
      }
      break;
    case Expr::Kind::binary: {
      // Left-associative: the left child may share this level, the right
      // child must bind tighter. Comparisons do not chain at all.
      int left_min = prec, right_min = prec + 1;
      if (prec == 4) left_min = 5;
      print_expr(*e.kids[0], left_min, out);
      out += ' ';
      out += binop_name(e.bin);
      out += ' ';
      print_expr(*e.kids[1], right_min, out);
      break;
    }
  }
  if (parens) out += ')';
}

void print_args(const std::vector<ExprPtr>& args, std::string& out) {
  out += '(';
  for (size_t i = 0; i < args.size(); ++i) {
    if (i) out += ", ";
    print_expr(*args[i], 0, out);
  }
  out += ')';
}

void print_block(const Block& b, int indent, std::string& out);

void print_stmt(const Stmt& s, int indent, std::string& out) {
  out.append(static_cast<size_t>(indent) * 2, ' ');
  switch (s.kind) {
    case Stmt::Kind::atomic_call:
      out += "atomic ";
      out += s.name;
      print_args(s.args, out);
      out += ";\n";
      break;
    case Stmt::Kind::proc_call:
      out += s.name;
      print_args(s.args, out);
      out += ";\n";
      break;
    case Stmt::Kind::reactor_bind:
      out += "let " + s.name + " = reactor " + quote(s.reactor) + ";\n";
      break;
    case Stmt::Kind::let:
      out += "let " + s.name + " = ";
      print_expr(*s.value, 0, out);
      out += ";\n";
      break;
    case Stmt::Kind::assign:
      out += s.name + " = ";
      print_expr(*s.value, 0, out);
      out += ";\n";
      break;
    case Stmt::Kind::if_stmt:
      out += "if ";
      print_expr(*s.value, 0, out);
      out += " {\n";
      print_block(s.body, indent + 1, out);
      out.append(static_cast<size_t>(indent) * 2, ' ');
      out += '}';
      if (!s.else_body.stmts.empty()) {
        out += " else {\n";
        print_block(s.else_body, indent + 1, out);
        out.append(static_cast<size_t>(indent) * 2, ' ');
        out += '}';
      }
      out += '\n';
      break;
    case Stmt::Kind::for_stmt:
      out += "for " + s.name + " in ";
      print_expr(*s.value, 0, out);
      out += " {\n";
      print_block(s.body, indent + 1, out);
      out.append(static_cast<size_t>(indent) * 2, ' ');
      out += "}\n";
      break;
    case Stmt::Kind::while_stmt:
      out += "while ";
      print_expr(*s.value, 0, out);
      out += " {\n";
      print_block(s.body, indent + 1, out);
      out.append(static_cast<size_t>(indent) * 2, ' ');
      out += "}\n";
      break;
    case Stmt::Kind::ret:
      out += "return";
      if (s.value) {
        out += ' ';
        print_expr(*s.value, 0, out);
      }
      out += ";\n";
      break;
  }
}

void print_block(const Block& b, int indent, std::string& out) {
  for (const StmtPtr& s : b.stmts) print_stmt(*s, indent, out);
}

}  // namespace

std::string to_source(const Expr& e) {
  std::string out;
  print_expr(e, 0, out);
  return out;
}

std::string to_source(const Procedure& p) {
  std::string out = "proc " + p.name + "(";
  for (size_t i = 0; i < p.params.size(); ++i) {
    if (i) out += ", ";
    out += p.params[i];
  }
  out += ") {\n";
  print_block(p.body, 1, out);
  out += "}\n";
  return out;
}

std::string to_source(const Program& p) {
  std::string out;
  for (size_t i = 0; i < p.procs.size(); ++i) {
    if (i) out += '\n';
    out += to_source(p.procs[i]);
  }
  return out;
}

}  // namespace pap::dsl
