#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "pap/jsonio.hpp"

namespace pap::learn {

// Sparse feature vector keyed by name. Absent keys mean zero.
using Features = std::map<std::string, double>;

struct Example {
  Features features;
  std::string label;
};

struct TrainConfig {
  double l2 = 1e-4;
  int epochs = 200;
  double step = 4.0;   // initial gradient step; backtracking halves it
  uint64_t seed = 0;   // recorded for provenance; training itself is exact
  // When non-empty, fixes the class set; every listed class must appear in
  // the data and no example may carry an unlisted label.
  std::vector<std::string> classes;
};

// Multiclass softmax regression over sparse named features, trained by
// full-batch maximum likelihood with L2 and a backtracking line search, so
// the recorded per-epoch loss never increases. An always-on bias feature is
// added internally.
class LinearModel {
 public:
  LinearModel() = default;

  // Throws std::invalid_argument when the data is empty, a declared class
  // has no examples, or an example's label is outside the declared classes.
  static LinearModel train(const std::vector<Example>& data,
                           const TrainConfig& cfg = {});

  std::string predict(const Features& f) const;
  // All classes with probabilities, sorted descending (ties by class name).
  std::vector<std::pair<std::string, double>> predict_proba(const Features& f) const;

  // Dense entry point for callers that manage their own indexing. The vector
  // length must equal feature_count(); anything else throws
  // std::invalid_argument (dimension mismatch).
  Eigen::VectorXd logits(const Eigen::VectorXd& dense) const;

  const std::vector<std::string>& classes() const { return classes_; }
  const std::vector<std::string>& feature_names() const { return feature_names_; }
  size_t feature_count() const { return feature_names_.size(); }
  const std::vector<double>& epoch_losses() const { return losses_; }
  uint64_t seed() const { return seed_; }

  Json to_json() const;
  static LinearModel from_json(const Json& j);

 private:
  std::vector<std::string> classes_;
  std::vector<std::string> feature_names_;
  std::map<std::string, int> feature_index_;
  Eigen::MatrixXd w_;  // classes x features
  Eigen::VectorXd b_;  // per-class bias
  std::vector<double> losses_;
  uint64_t seed_ = 0;

  Eigen::VectorXd densify(const Features& f) const;
};

// One pointer-selection example: a gold index into a variable-length
// candidate list, each candidate described by joint (context, candidate)
// features sharing one weight vector.
struct PointerExample {
  std::vector<Features> candidates;
  int gold = 0;
};

// Binary-weight softmax over candidate lists: score(c) = w . phi(c), with the
// probability normalized within each example's list. Same training regime as
// LinearModel.
class PointerModel {
 public:
  PointerModel() = default;

  // Throws std::invalid_argument on empty data, an empty candidate list, or
  // a gold index outside its list.
  static PointerModel train(const std::vector<PointerExample>& data,
                            const TrainConfig& cfg = {});

  // Returns the argmax index; scores() exposes the per-candidate softmax.
  int predict(const std::vector<Features>& candidates) const;
  std::vector<double> scores(const std::vector<Features>& candidates) const;

  const std::vector<double>& epoch_losses() const { return losses_; }
  const std::vector<std::string>& feature_names() const { return feature_names_; }

  Json to_json() const;
  static PointerModel from_json(const Json& j);

 private:
  std::vector<std::string> feature_names_;
  std::map<std::string, int> feature_index_;
  Eigen::VectorXd w_;
  std::vector<double> losses_;

  double score_one(const Features& f) const;
};

}  // namespace pap::learn
