#pragma once

#include <string>
#include <utility>
#include <vector>

#include "pap/dsl/ast.hpp"
#include "pap/jsonio.hpp"

namespace pap {

// A versioned set of procedure sources plus the reactors they rely on.
// Immutable after load; experiments swap whole bundles, never edit one.
struct LibraryBundle {
  std::string id;       // e.g. "iqa/v1"
  std::string version;
  std::vector<std::pair<std::string, std::string>> sources;  // filename -> text
  std::vector<std::string> reactors;  // declared reactor dependencies
  std::vector<std::string> notes;     // authoring notes from the manifest
  dsl::Program program;               // all sources parsed and merged
};

std::vector<std::string> builtin_bundle_names();

// Loads one of the shipped bundles ("iqa/v1", "iqa/v0.1", "alfred/v1",
// "alfred/c1-heat-variant"). Throws std::invalid_argument for unknown names.
LibraryBundle load_builtin(const std::string& name);

// Reactor names bound anywhere in the program, sorted and unique.
std::vector<std::string> referenced_reactors(const dsl::Program& p);

// Full static checking plus the bundle contract: the declared reactor list
// matches the referenced set exactly. Throws std::runtime_error.
void validate_bundle(const LibraryBundle& b);

// Structural per-procedure diff between two bundles.
struct LibraryDiff {
  std::vector<std::string> added;     // in b only
  std::vector<std::string> removed;   // in a only
  std::vector<std::string> modified;  // in both, different body or params
  bool empty() const { return added.empty() && removed.empty() && modified.empty(); }
};

LibraryDiff diff_bundles(const LibraryBundle& a, const LibraryBundle& b);
Json diff_to_json(const LibraryDiff& d);

}  // namespace pap
