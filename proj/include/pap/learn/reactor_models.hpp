#pragma once

#include <memory>
#include <string>
#include <vector>

#include "pap/interp/reactors.hpp"
#include "pap/learn/linear_model.hpp"
#include "pap/presearch.hpp"
#include "pap/world.hpp"

namespace pap::learn {

// The attribute model predicts one of three joint door states, which keeps
// is_open and is_closed mutually exclusive for openable objects by
// construction.
constexpr const char* kAttrClosedOpenable = "closed_openable";
constexpr const char* kAttrOpenOpenable = "open_openable";
constexpr const char* kAttrNotOpenable = "not_openable";

struct AttrFlags {
  bool is_openable = false;
  bool is_open = false;
  bool is_closed = false;
};
AttrFlags flags_from_state(const std::string& joint_state);

// Weak supervision mined from a gold atomic trace:
//  - an Open immediately preceding a Pickup from that receptacle labels the
//    receptacle openable and closed-at-query-time;
//  - a Pickup with no such Open labels its receptacle not openable (noisy
//    when the door happened to start open — accepted induction error);
//  - the receptacle containing an object when it is picked up labels where
//    that object class lives;
//  - detected (movable, receptacle) box pairs along the rollout label the
//    visual containment relation from ground truth.
struct AttrExample {
  std::string recep_class;
  bool openable = false;
  bool is_open = false;  // meaningful only when openable
};
struct RefindExample {
  std::string obj_class;
  std::string recep_class;
};
struct RelExample {
  BBox obj;
  BBox recep;
  bool in = false;
};

struct InducedLabels {
  std::vector<AttrExample> attr;
  std::vector<RefindExample> refind;
  std::vector<RelExample> rel;
  void append(InducedLabels other);
};

// Replays the trace step by step on a copy of the scene and mines labels.
// Throws std::runtime_error when any step fails to replay.
InducedLabels induce_reactor_labels(const std::vector<AtomicAction>& trace,
                                    const SceneState& scene,
                                    std::shared_ptr<const PresearchMap> map);

Json labels_to_json(const InducedLabels& l);
InducedLabels labels_from_json(const Json& j);

// Shared feature builders, used for both training and querying so the two
// sides can never drift apart.
Features attr_features(const std::string& recep_class);
Features refind_features(const std::string& obj_class);
Features rel_features(const BBox& obj, const BBox& recep);

// The three trainable runtime modules. Buckets without any examples leave
// the corresponding model untrained; the learned registry then falls back to
// the hand-built implementation for that reactor.
struct ReactorModels {
  LinearModel attr;
  LinearModel refind;
  LinearModel rel;

  bool has_attr() const { return !attr.classes().empty(); }
  bool has_refind() const { return !refind.classes().empty(); }
  bool has_rel() const { return !rel.classes().empty(); }

  Json to_json() const;
  static ReactorModels from_json(const Json& j);
};

ReactorModels train_reactor_models(const InducedLabels& labels,
                                   const TrainConfig& cfg = {});

// A runtime registry where attribute, relation, and object-location queries
// go through the trained models; perception (masks, receptacle detection)
// stays hand-built. The agent's own successful actions override model
// predictions: opening a door marks it open, moving an object fixes its
// believed place.
interp::ReactorRegistry learned_registry(std::shared_ptr<const ReactorModels> models);

}  // namespace pap::learn
