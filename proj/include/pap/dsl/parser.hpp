#pragma once

#include <stdexcept>
#include <string>

#include "pap/dsl/ast.hpp"

namespace pap::dsl {

struct ParseError : std::runtime_error {
  int line, col;
  ParseError(const std::string& msg, int line_, int col_)
      : std::runtime_error("line " + std::to_string(line_) + ", col " +
                           std::to_string(col_) + ": " + msg),
        line(line_),
        col(col_) {}
};

// Parses a whole source file (zero or more procedures). Statement ids are
// assigned in source order, starting at 1.
Program parse_program(const std::string& source);

// Parses a single expression; the whole string must be consumed.
ExprPtr parse_expression(const std::string& source);

}  // namespace pap::dsl
