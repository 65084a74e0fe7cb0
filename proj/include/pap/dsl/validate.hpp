#pragma once

#include <string>
#include <vector>

#include "pap/dsl/ast.hpp"

namespace pap::dsl {

// Reactor names a program may bind. Querying anything else is a static error.
const std::vector<std::string>& known_reactors();

// Variable names every procedure can read without declaring them; the
// environment binds them per scene (appliance ids, the reachable-cell list).
const std::vector<std::string>& scene_globals();

struct ValidateIssue {
  std::string proc;     // enclosing procedure
  int line = 0;
  std::string message;
};

// Static checks: unique udp_-prefixed procedure names, known atomic actions
// with correct arity, known reactors, variables defined before use, call
// targets resolvable, and call-free boolean conditions in if/while.
std::vector<ValidateIssue> validate(const Program& p);

// Throws std::runtime_error listing every issue; no-op if the program is clean.
void validate_or_throw(const Program& p);

}  // namespace pap::dsl
