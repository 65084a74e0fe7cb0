#include "pap/library.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "pap/dsl/parser.hpp"
#include "pap/dsl/validate.hpp"

namespace pap {

namespace {

struct BuiltinFile {
  const char* bundle;
  const char* path;
  const char* text;
};

#include "builtin_libraries.inc"

void collect_reactors(const dsl::Block& b, std::set<std::string>& out);

void collect_reactors(const dsl::Stmt& s, std::set<std::string>& out) {
  if (s.kind == dsl::Stmt::Kind::reactor_bind) out.insert(s.reactor);
  collect_reactors(s.body, out);
  collect_reactors(s.else_body, out);
}

void collect_reactors(const dsl::Block& b, std::set<std::string>& out) {
  for (const dsl::StmtPtr& s : b.stmts) collect_reactors(*s, out);
}

void renumber(dsl::Block& b, int& next);

void renumber(dsl::Stmt& s, int& next) {
  s.id = next++;
  renumber(s.body, next);
  renumber(s.else_body, next);
}

void renumber(dsl::Block& b, int& next) {
  for (dsl::StmtPtr& s : b.stmts) renumber(*s, next);
}

std::string join(const std::vector<std::string>& xs) {
  std::string out;
  for (const std::string& x : xs) {
    if (!out.empty()) out += ", ";
    out += x;
  }
  return out;
}

}  // namespace

std::vector<std::string> builtin_bundle_names() {
  std::vector<std::string> names;
  for (const BuiltinFile& f : kBuiltinFiles)
    if (std::find(names.begin(), names.end(), f.bundle) == names.end())
      names.push_back(f.bundle);
  return names;
}

LibraryBundle load_builtin(const std::string& name) {
  const char* manifest_text = nullptr;
  for (const BuiltinFile& f : kBuiltinFiles)
    if (name == f.bundle && std::string("manifest.json") == f.path)
      manifest_text = f.text;
  if (!manifest_text) throw std::invalid_argument("unknown bundle: " + name);

  Json m = Json::parse(manifest_text);
  LibraryBundle b;
  b.id = m.at("id");
  b.version = m.at("version");
  for (const Json& r : m.at("reactors")) b.reactors.push_back(r);
  for (const Json& n : m.at("notes")) b.notes.push_back(n);
  if (b.id != name)
    throw std::runtime_error("bundle " + name + " declares mismatched id " + b.id);

  for (const Json& sj : m.at("sources")) {
    const std::string src = sj;
    const char* text = nullptr;
    for (const BuiltinFile& f : kBuiltinFiles)
      if (name == f.bundle && src == f.path) text = f.text;
    if (!text)
      throw std::runtime_error(name + ": manifest lists missing source " + src);
    b.sources.emplace_back(src, text);
    dsl::Program part = dsl::parse_program(text);
    for (dsl::Procedure& p : part.procs) b.program.procs.push_back(std::move(p));
  }
  // Per-file parses restart statement ids; make them unique bundle-wide.
  int next = 1;
  for (dsl::Procedure& p : b.program.procs) renumber(p.body, next);
  return b;
}

std::vector<std::string> referenced_reactors(const dsl::Program& p) {
  std::set<std::string> used;
  for (const dsl::Procedure& proc : p.procs) collect_reactors(proc.body, used);
  return {used.begin(), used.end()};
}

void validate_bundle(const LibraryBundle& b) {
  dsl::validate_or_throw(b.program);
  std::vector<std::string> used = referenced_reactors(b.program);
  std::vector<std::string> declared = b.reactors;
  std::sort(declared.begin(), declared.end());
  if (used != declared)
    throw std::runtime_error(b.id + ": declared reactors [" + join(declared) +
                             "] do not match referenced [" + join(used) + "]");
}

LibraryDiff diff_bundles(const LibraryBundle& a, const LibraryBundle& b) {
  LibraryDiff d;
  for (const dsl::Procedure& p : a.program.procs) {
    const dsl::Procedure* q = b.program.find(p.name);
    if (!q)
      d.removed.push_back(p.name);
    else if (!dsl::equal(p, *q))
      d.modified.push_back(p.name);
  }
  for (const dsl::Procedure& p : b.program.procs)
    if (!a.program.find(p.name)) d.added.push_back(p.name);
  std::sort(d.added.begin(), d.added.end());
  std::sort(d.removed.begin(), d.removed.end());
  std::sort(d.modified.begin(), d.modified.end());
  return d;
}

Json diff_to_json(const LibraryDiff& d) {
  Json j;
  j["added"] = d.added;
  j["removed"] = d.removed;
  j["modified"] = d.modified;
  return j;
}

}  // namespace pap
