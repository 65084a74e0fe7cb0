#include "pap/interp/value.hpp"

namespace pap::interp {

bool Value::operator==(const Value& o) const {
  if (v_.index() != o.v_.index()) return false;
  if (is_list()) {
    const List& a = as_list();
    const List& b = o.as_list();
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
      if (a[i] != b[i]) return false;
    return true;
  }
  return v_ == o.v_;
}

std::string Value::type_name() const {
  if (is_none()) return "none";
  if (is_bool()) return "bool";
  if (is_int()) return "int";
  if (is_str()) return "str";
  if (is_obj()) return "obj";
  if (is_pos()) return "pos";
  if (is_reactor()) return "reactor";
  return "list";
}

std::string Value::show() const {
  if (is_none()) return "NONE";
  if (is_bool()) return as_bool() ? "true" : "false";
  if (is_int()) return std::to_string(as_int());
  if (is_str()) return "\"" + as_str() + "\"";
  if (is_obj()) return "<" + as_obj().id + ">";
  if (is_pos())
    return "(" + std::to_string(as_pos().x) + "," + std::to_string(as_pos().y) + ")";
  if (is_reactor()) return "reactor:" + as_reactor().name;
  std::string out = "[";
  const List& xs = as_list();
  for (size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    out += xs[i].show();
  }
  return out + "]";
}

Json value_to_json(const Value& v) {
  if (v.is_none()) return Json(nullptr);
  if (v.is_bool()) return Json(v.as_bool());
  if (v.is_int()) return Json(v.as_int());
  if (v.is_str()) return Json(v.as_str());
  if (v.is_obj()) {
    Json j;
    j["obj"] = v.as_obj().id;
    j["cls"] = v.as_obj().cls;
    return j;
  }
  if (v.is_pos()) {
    Json j;
    j["pos"] = Json::array({v.as_pos().x, v.as_pos().y});
    return j;
  }
  if (v.is_reactor()) {
    Json j;
    j["reactor"] = v.as_reactor().name;
    return j;
  }
  Json arr = Json::array();
  for (const Value& x : v.as_list()) arr.push_back(value_to_json(x));
  return arr;
}

Value value_from_json(const Json& j) {
  if (j.is_null()) return Value::none();
  if (j.is_boolean()) return Value::of(j.get<bool>());
  if (j.is_number_integer()) return Value::of(j.get<int64_t>());
  if (j.is_string()) return Value::of(j.get<std::string>());
  if (j.is_array()) {
    Value::List xs;
    for (const Json& e : j) xs.push_back(value_from_json(e));
    return Value::of(std::move(xs));
  }
  if (j.is_object()) {
    if (j.contains("obj")) return Value::of(ObjRef{j.at("obj"), j.at("cls")});
    if (j.contains("pos"))
      return Value::of(PosVal{j.at("pos")[0].get<int>(), j.at("pos")[1].get<int>()});
    if (j.contains("reactor"))
      return Value::of(ReactorHandle{j.at("reactor").get<std::string>()});
  }
  throw std::runtime_error("cannot decode value: " + j.dump());
}

}  // namespace pap::interp
