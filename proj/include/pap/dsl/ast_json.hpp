#pragma once

#include "pap/dsl/ast.hpp"
#include "pap/jsonio.hpp"

namespace pap::dsl {

// ast/1 export, for tooling that wants the tree without reparsing.
Json ast_to_json(const Program& p);

// Graphviz rendering of the same tree; one cluster per procedure.
std::string ast_to_dot(const Program& p);

}  // namespace pap::dsl
