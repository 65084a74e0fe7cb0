#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace pap::dsl {

// Expression tree. One node type keeps cloning, comparison and printing in
// one obvious place; `kind` says which fields are meaningful.
struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

enum class BinOp { logical_or, logical_and, eq, ne, membership, add };
enum class UnOp { logical_not, negate };

const char* binop_name(BinOp op);  // "or", "and", "==", "!=", "in", "+"
const char* unop_name(UnOp op);    // "not", "-"

struct Expr {
  enum class Kind {
    int_lit,   // int_val
    str_lit,   // name holds the value
    bool_lit,  // bool_val
    enum_lit,  // name, e.g. OBJ_IN_RECEP
    var,       // name
    attr,      // kids[0].name — field access
    list,      // kids
    unary,     // un, kids[0]
    binary,    // bin, kids[0], kids[1]
    call,      // name(kids...) — resolved to a reactor or procedure at run time
  };
  Kind kind = Kind::int_lit;
  int64_t int_val = 0;
  bool bool_val = false;
  std::string name;
  BinOp bin = BinOp::add;
  UnOp un = UnOp::logical_not;
  std::vector<ExprPtr> kids;
  int line = 0, col = 0;
};

ExprPtr clone(const Expr& e);
bool equal(const Expr& a, const Expr& b);  // structural; ignores positions

struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;

struct Block {
  std::vector<StmtPtr> stmts;
};

struct Stmt {
  enum class Kind {
    atomic_call,   // atomic name(args);
    proc_call,     // name(args);
    reactor_bind,  // let name = reactor "reactor";
    let,           // let name = value;
    assign,        // name = value;
    if_stmt,       // if value body [else else_body]
    for_stmt,      // for name in value body
    while_stmt,    // while value body
    ret,           // return [value];
  };
  Kind kind = Kind::ret;
  int id = 0;  // unique within the program; parser-assigned, ignored by equal()
  std::string name;     // action/procedure name, bound variable, or loop variable
  std::string reactor;  // reactor_bind only
  std::vector<ExprPtr> args;
  ExprPtr value;  // RHS, condition, iterable, or return value (may be null)
  Block body, else_body;
  int line = 0, col = 0;
};

Block clone(const Block& b);
bool equal(const Block& a, const Block& b);
bool equal(const Stmt& a, const Stmt& b);

struct Procedure {
  std::string name;  // udp_*
  std::vector<std::string> params;
  Block body;
  int line = 0;
};

struct Program {
  std::vector<Procedure> procs;
  const Procedure* find(const std::string& name) const;
};

Procedure clone(const Procedure& p);
Program clone(const Program& p);
bool equal(const Procedure& a, const Procedure& b);
bool equal(const Program& a, const Program& b);

}  // namespace pap::dsl
