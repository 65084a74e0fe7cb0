#pragma once

#include <string>

#include "pap/bench.hpp"

namespace pap::bench::detail {

// Question answers as surface strings: bools map to yes/no, counts to their
// digits. Empty for anything else (a malformed result can never be correct).
std::string answer_text(TaskKind kind, const interp::Value& v);

// Failure attribution for a non-success trace: faults charge the reactors,
// blown budgets the budget, failed navigation the navigation, and any other
// failed atomic the grounding of its arguments.
FailCause trace_cause(const interp::ExecutionTrace& tr, std::string* detail);

}  // namespace pap::bench::detail
