#pragma once

// Shared fixtures for the test binaries.

#include "pap/world.hpp"

namespace pap_test {

inline pap::ObjectInstance make_obj(const std::string& id, const std::string& cls) {
  const pap::ClassInfo& info = pap::class_info(cls);
  pap::ObjectInstance o;
  o.id = id;
  o.class_name = cls;
  o.attrs.is_receptacle = info.is_receptacle;
  o.attrs.openable = info.openable;
  o.attrs.toggleable = info.toggleable;
  o.attrs.pickupable = info.pickupable;
  o.attrs.sliceable = info.sliceable;
  return o;
}

// A fixed hand-built scene exercising every appliance.
//
//   fridge(0,3)  microwave(0,5)  drawer(0,7)  table(4,0)
//   sink(7,3)    faucet(7,2)     lamp(7,7)
//   mug in fridge, egg in microwave, rest on the table
inline pap::SceneState tiny_scene() {
  using namespace pap;
  SceneState s;
  s.grid_w = 8;
  s.grid_h = 8;
  s.style_id = "test";
  auto add_floor = [&](const std::string& id, const std::string& cls, Cell c) {
    ObjectInstance o = make_obj(id, cls);
    o.location = {ObjectLocation::Kind::on_floor, c, class_info(cls).band, ""};
    s.objects[id] = o;
    s.blocked.push_back(c);
  };
  auto add_in = [&](const std::string& id, const std::string& cls,
                    const std::string& recep) {
    ObjectInstance o = make_obj(id, cls);
    o.location = {ObjectLocation::Kind::in_receptacle, {}, HeightBand::mid, recep};
    s.objects[id] = o;
  };
  add_floor("fridge_1", "fridge", {0, 3});
  add_floor("microwave_1", "microwave", {0, 5});
  add_floor("drawer_1", "drawer", {0, 7});
  add_floor("table_1", "table", {4, 0});
  add_floor("sink_1", "sink", {7, 3});
  add_floor("faucet_1", "faucet", {7, 2});
  add_floor("lamp_1", "lamp", {7, 7});
  add_in("mug_1", "mug", "fridge_1");
  add_in("egg_1", "egg", "microwave_1");
  add_in("plate_1", "plate", "table_1");
  add_in("apple_1", "apple", "table_1");
  add_in("knife_1", "knife", "table_1");
  add_in("laptop_1", "laptop", "table_1");
  s.agent = {{2, 3}, 270, 0};
  s.check_invariants();
  return s;
}

inline pap::AtomicAction act(pap::ActionKind k, const std::string& obj = "",
                             const std::string& recep = "") {
  pap::AtomicAction a;
  a.kind = k;
  a.obj = obj;
  a.recep = recep;
  return a;
}

}  // namespace pap_test
