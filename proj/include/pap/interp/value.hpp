#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "pap/jsonio.hpp"

namespace pap::interp {

// A scanned object instance. The class is whatever the perception channel
// reported at scan time, so under noise it can disagree with ground truth.
struct ObjRef {
  std::string id;
  std::string cls;
  // Identity is the instance id; the class label is advisory.
  bool operator==(const ObjRef& o) const { return id == o.id; }
};

struct PosVal {
  int x = 0, y = 0;
  bool operator==(const PosVal&) const = default;
};

struct ReactorHandle {
  std::string name;
  bool operator==(const ReactorHandle&) const = default;
};

// Runtime value of the procedure language. Lists are shared because the
// language has no in-place mutation: concatenation always builds a new list.
class Value {
 public:
  using List = std::vector<Value>;

  Value() = default;  // none
  static Value none() { return Value(); }
  static Value of(bool b) { return Value(Repr(b)); }
  static Value of(int64_t i) { return Value(Repr(i)); }
  static Value of(std::string s) { return Value(Repr(std::move(s))); }
  static Value of(ObjRef r) { return Value(Repr(std::move(r))); }
  static Value of(PosVal p) { return Value(Repr(p)); }
  static Value of(ReactorHandle h) { return Value(Repr(std::move(h))); }
  static Value of(List xs) {
    return Value(Repr(std::make_shared<List>(std::move(xs))));
  }

  bool is_none() const { return std::holds_alternative<std::monostate>(v_); }
  bool is_bool() const { return std::holds_alternative<bool>(v_); }
  bool is_int() const { return std::holds_alternative<int64_t>(v_); }
  bool is_str() const { return std::holds_alternative<std::string>(v_); }
  bool is_obj() const { return std::holds_alternative<ObjRef>(v_); }
  bool is_pos() const { return std::holds_alternative<PosVal>(v_); }
  bool is_reactor() const { return std::holds_alternative<ReactorHandle>(v_); }
  bool is_list() const { return std::holds_alternative<std::shared_ptr<List>>(v_); }

  bool as_bool() const { return std::get<bool>(v_); }
  int64_t as_int() const { return std::get<int64_t>(v_); }
  const std::string& as_str() const { return std::get<std::string>(v_); }
  const ObjRef& as_obj() const { return std::get<ObjRef>(v_); }
  PosVal as_pos() const { return std::get<PosVal>(v_); }
  const ReactorHandle& as_reactor() const { return std::get<ReactorHandle>(v_); }
  const List& as_list() const { return *std::get<std::shared_ptr<List>>(v_); }

  // Type mismatches compare unequal instead of faulting.
  bool operator==(const Value& o) const;
  bool operator!=(const Value& o) const { return !(*this == o); }

  std::string type_name() const;
  std::string show() const;  // compact human-readable form for traces

 private:
  using Repr = std::variant<std::monostate, bool, int64_t, std::string, ObjRef,
                            PosVal, ReactorHandle, std::shared_ptr<List>>;
  explicit Value(Repr v) : v_(std::move(v)) {}
  Repr v_;
};

Json value_to_json(const Value& v);
Value value_from_json(const Json& j);

}  // namespace pap::interp
