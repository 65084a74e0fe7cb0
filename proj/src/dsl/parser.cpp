#include "pap/dsl/parser.hpp"

#include <cctype>

namespace pap::dsl {

namespace {

enum class Tok {
  ident,     // lower-case identifier or keyword
  enum_sym,  // UPPER_CASE symbol
  int_lit,
  str_lit,
  lparen, rparen, lbrace, rbrace, lbracket, rbracket,
  comma, semicolon, dot,
  assign,  // =
  eq,      // ==
  ne,      // !=
  plus, minus,
  eof,
};

struct Token {
  Tok kind = Tok::eof;
  std::string text;
  int64_t value = 0;
  int line = 1, col = 1;
};

bool is_keyword(const std::string& s) {
  static const char* kws[] = {"proc", "atomic", "let", "reactor", "if",   "else",
                              "for",  "in",     "while", "return", "true", "false",
                              "not",  "and",    "or"};
  for (const char* k : kws)
    if (s == k) return true;
  return false;
}

std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto make = [&](Tok k) {
    Token t;
    t.kind = k;
    t.line = line;
    t.col = col;
    return t;
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == '\n') {
      ++line;
      col = 1;
      ++i;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      ++col;
      ++i;
      continue;
    }
    if (c == '#') {  // comment to end of line
      while (i < src.size() && src[i] != '\n') ++i;
      continue;
    }
    Token t = make(Tok::eof);
    if (std::isdigit(static_cast<unsigned char>(c))) {
      t.kind = Tok::int_lit;
      size_t start = i;
      while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
      t.text = src.substr(start, i - start);
      t.value = std::stoll(t.text);
      col += static_cast<int>(t.text.size());
      out.push_back(t);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = i;
      while (i < src.size() && (std::isalnum(static_cast<unsigned char>(src[i])) ||
                                src[i] == '_'))
        ++i;
      t.text = src.substr(start, i - start);
      bool upper = std::isupper(static_cast<unsigned char>(c));
      t.kind = upper ? Tok::enum_sym : Tok::ident;
      col += static_cast<int>(t.text.size());
      out.push_back(t);
      continue;
    }
    if (c == '"') {
      t.kind = Tok::str_lit;
      ++i;
      ++col;
      std::string s;
      while (true) {
        if (i >= src.size() || src[i] == '\n')
          throw ParseError("unterminated string literal", t.line, t.col);
        char d = src[i];
        if (d == '"') {
          ++i;
          ++col;
          break;
        }
        if (d == '\\') {
          if (i + 1 >= src.size()) throw ParseError("bad escape", line, col);
          char e = src[i + 1];
          if (e == 'n') s += '\n';
          else if (e == '"') s += '"';
          else if (e == '\\') s += '\\';
          else throw ParseError(std::string("bad escape: \\") + e, line, col);
          i += 2;
          col += 2;
          continue;
        }
        s += d;
        ++i;
        ++col;
      }
      t.text = s;
      out.push_back(t);
      continue;
    }
    auto two = [&](char next) { return i + 1 < src.size() && src[i + 1] == next; };
    switch (c) {
      case '(': t.kind = Tok::lparen; break;
      case ')': t.kind = Tok::rparen; break;
      case '{': t.kind = Tok::lbrace; break;
      case '}': t.kind = Tok::rbrace; break;
      case '[': t.kind = Tok::lbracket; break;
      case ']': t.kind = Tok::rbracket; break;
      case ',': t.kind = Tok::comma; break;
      case ';': t.kind = Tok::semicolon; break;
      case '.': t.kind = Tok::dot; break;
      case '+': t.kind = Tok::plus; break;
      case '-': t.kind = Tok::minus; break;
      case '=':
        if (two('=')) {
          t.kind = Tok::eq;
          ++i;
          ++col;
        } else {
          t.kind = Tok::assign;
        }
        break;
      case '!':
        if (two('=')) {
          t.kind = Tok::ne;
          ++i;
          ++col;
        } else {
          throw ParseError("unexpected '!'", line, col);
        }
        break;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", line, col);
    }
    ++i;
    ++col;
    out.push_back(t);
  }
  Token t;
  t.kind = Tok::eof;
  t.line = line;
  t.col = col;
  out.push_back(t);
  return out;
}

class Parser {
 public:
  explicit Parser(const std::string& src) : toks_(lex(src)) {}

  Program program() {
    Program prog;
    while (!at(Tok::eof)) prog.procs.push_back(procedure());
    return prog;
  }

  ExprPtr single_expression() {
    ExprPtr e = expression();
    expect(Tok::eof, "end of input");
    return e;
  }

 private:
  std::vector<Token> toks_;
  size_t pos_ = 0;
  int next_id_ = 1;

  const Token& cur() const { return toks_[pos_]; }
  bool at(Tok k) const { return cur().kind == k; }
  bool at_kw(const char* kw) const { return at(Tok::ident) && cur().text == kw; }
  Token take() { return toks_[pos_++]; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, cur().line, cur().col);
  }

  Token expect(Tok k, const char* what) {
    if (!at(k)) fail(std::string("expected ") + what);
    return take();
  }

  Token expect_kw(const char* kw) {
    if (!at_kw(kw)) fail(std::string("expected '") + kw + "'");
    return take();
  }

  std::string ident() {
    if (!at(Tok::ident)) fail("expected identifier");
    if (is_keyword(cur().text)) fail("'" + cur().text + "' is a keyword");
    return take().text;
  }

  Procedure procedure() {
    Procedure p;
    p.line = cur().line;
    expect_kw("proc");
    p.name = ident();
    expect(Tok::lparen, "'('");
    if (!at(Tok::rparen)) {
      p.params.push_back(ident());
      while (at(Tok::comma)) {
        take();
        p.params.push_back(ident());
      }
    }
    expect(Tok::rparen, "')'");
    p.body = block();
    return p;
  }

  Block block() {
    Block b;
    expect(Tok::lbrace, "'{'");
    while (!at(Tok::rbrace)) b.stmts.push_back(statement());
    take();  // }
    return b;
  }

  std::vector<ExprPtr> arg_list(Tok close, const char* close_name) {
    std::vector<ExprPtr> args;
    if (!at(close)) {
      args.push_back(expression());
      while (at(Tok::comma)) {
        take();
        args.push_back(expression());
      }
    }
    expect(close, close_name);
    return args;
  }

  StmtPtr make_stmt(Stmt::Kind kind) {
    auto s = std::make_unique<Stmt>();
    s->kind = kind;
    s->id = next_id_++;
    s->line = cur().line;
    s->col = cur().col;
    return s;
  }

  StmtPtr statement() {
    if (at_kw("atomic")) {
      auto s = make_stmt(Stmt::Kind::atomic_call);
      take();
      s->name = ident();
      expect(Tok::lparen, "'('");
      s->args = arg_list(Tok::rparen, "')'");
      expect(Tok::semicolon, "';'");
      return s;
    }
    if (at_kw("let")) {
      auto s = make_stmt(Stmt::Kind::let);
      take();
      s->name = ident();
      expect(Tok::assign, "'='");
      if (at_kw("reactor")) {
        take();
        s->kind = Stmt::Kind::reactor_bind;
        s->reactor = expect(Tok::str_lit, "reactor name string").text;
      } else {
        s->value = expression();
      }
      expect(Tok::semicolon, "';'");
      return s;
    }
    if (at_kw("if")) {
      auto s = make_stmt(Stmt::Kind::if_stmt);
      take();
      s->value = expression();
      s->body = block();
      if (at_kw("else")) {
        take();
        s->else_body = block();
      }
      return s;
    }
    if (at_kw("for")) {
      auto s = make_stmt(Stmt::Kind::for_stmt);
      take();
      s->name = ident();
      expect_kw("in");
      s->value = expression();
      s->body = block();
      return s;
    }
    if (at_kw("while")) {
      auto s = make_stmt(Stmt::Kind::while_stmt);
      take();
      s->value = expression();
      s->body = block();
      return s;
    }
    if (at_kw("return")) {
      auto s = make_stmt(Stmt::Kind::ret);
      take();
      if (!at(Tok::semicolon)) s->value = expression();
      expect(Tok::semicolon, "';'");
      return s;
    }
    if (at(Tok::ident)) {
      if (is_keyword(cur().text)) fail("unexpected keyword '" + cur().text + "'");
      auto s = make_stmt(Stmt::Kind::proc_call);
      s->name = take().text;
      if (at(Tok::lparen)) {
        take();
        s->args = arg_list(Tok::rparen, "')'");
        expect(Tok::semicolon, "';'");
        return s;
      }
      if (at(Tok::assign)) {
        take();
        s->kind = Stmt::Kind::assign;
        s->value = expression();
        expect(Tok::semicolon, "';'");
        return s;
      }
      fail("expected '(' or '=' after identifier");
    }
    fail("expected statement");
  }

  ExprPtr make_expr(Expr::Kind kind) {
    auto e = std::make_unique<Expr>();
    e->kind = kind;
    e->line = cur().line;
    e->col = cur().col;
    return e;
  }

  ExprPtr expression() { return or_expr(); }

  ExprPtr binary(ExprPtr lhs, BinOp op, ExprPtr rhs) {
    auto e = std::make_unique<Expr>();
    e->kind = Expr::Kind::binary;
    e->bin = op;
    e->line = lhs->line;
    e->col = lhs->col;
    e->kids.push_back(std::move(lhs));
    e->kids.push_back(std::move(rhs));
    return e;
  }

  ExprPtr or_expr() {
    ExprPtr e = and_expr();
    while (at_kw("or")) {
      take();
      e = binary(std::move(e), BinOp::logical_or, and_expr());
    }
    return e;
  }

  ExprPtr and_expr() {
    ExprPtr e = not_expr();
    while (at_kw("and")) {
      take();
      e = binary(std::move(e), BinOp::logical_and, and_expr_rhs());
    }
    return e;
  }

  ExprPtr and_expr_rhs() { return not_expr(); }

  ExprPtr not_expr() {
    if (at_kw("not")) {
      auto e = make_expr(Expr::Kind::unary);
      take();
      e->un = UnOp::logical_not;
      e->kids.push_back(not_expr());
      return e;
    }
    return cmp_expr();
  }

  ExprPtr cmp_expr() {
    ExprPtr e = add_expr();
    if (at(Tok::eq) || at(Tok::ne) || at_kw("in")) {
      BinOp op = at(Tok::eq) ? BinOp::eq : at(Tok::ne) ? BinOp::ne : BinOp::membership;
      take();
      e = binary(std::move(e), op, add_expr());
    }
    return e;
  }

  ExprPtr add_expr() {
    ExprPtr e = unary_expr();
    while (at(Tok::plus)) {
      take();
      e = binary(std::move(e), BinOp::add, unary_expr());
    }
    return e;
  }

  ExprPtr unary_expr() {
    if (at(Tok::minus)) {
      auto e = make_expr(Expr::Kind::unary);
      take();
      e->un = UnOp::negate;
      e->kids.push_back(unary_expr());
      return e;
    }
    return postfix_expr();
  }

  ExprPtr postfix_expr() {
    ExprPtr e = primary();
    while (true) {
      if (at(Tok::lparen)) {
        if (e->kind != Expr::Kind::var)
          fail("only simple names can be called");
        auto call = make_expr(Expr::Kind::call);
        take();
        call->name = e->name;
        call->line = e->line;
        call->col = e->col;
        call->kids = arg_list(Tok::rparen, "')'");
        e = std::move(call);
        continue;
      }
      if (at(Tok::dot)) {
        auto attr = make_expr(Expr::Kind::attr);
        take();
        attr->name = ident();
        attr->line = e->line;
        attr->col = e->col;
        attr->kids.push_back(std::move(e));
        e = std::move(attr);
        continue;
      }
      break;
    }
    return e;
  }

  ExprPtr primary() {
    if (at(Tok::int_lit)) {
      auto e = make_expr(Expr::Kind::int_lit);
      e->int_val = take().value;
      return e;
    }
    if (at(Tok::str_lit)) {
      auto e = make_expr(Expr::Kind::str_lit);
      e->name = take().text;
      return e;
    }
    if (at_kw("true") || at_kw("false")) {
      auto e = make_expr(Expr::Kind::bool_lit);
      e->bool_val = take().text == "true";
      return e;
    }
    if (at(Tok::enum_sym)) {
      auto e = make_expr(Expr::Kind::enum_lit);
      e->name = take().text;
      return e;
    }
    if (at(Tok::ident)) {
      if (is_keyword(cur().text)) fail("unexpected keyword '" + cur().text + "'");
      auto e = make_expr(Expr::Kind::var);
      e->name = take().text;
      return e;
    }
    if (at(Tok::lbracket)) {
      auto e = make_expr(Expr::Kind::list);
      take();
      e->kids = arg_list(Tok::rbracket, "']'");
      return e;
    }
    if (at(Tok::lparen)) {
      take();
      ExprPtr e = expression();
      expect(Tok::rparen, "')'");
      return e;
    }
    fail("expected expression");
  }
};

}  // namespace

Program parse_program(const std::string& source) {
  return Parser(source).program();
}

ExprPtr parse_expression(const std::string& source) {
  return Parser(source).single_expression();
}

}  // namespace pap::dsl
