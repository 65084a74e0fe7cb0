#pragma once

#include <string>

#include "pap/dsl/ast.hpp"

namespace pap::dsl {

// Canonical source form: 2-space indent, one statement per line, minimal
// parentheses. parse(to_source(p)) is structurally equal to p, and printing
// is idempotent: to_source(parse(to_source(p))) == to_source(p).
std::string to_source(const Program& p);
std::string to_source(const Procedure& p);
std::string to_source(const Expr& e);

}  // namespace pap::dsl
