#include "pap/learn/linear_model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include <Eigen/Sparse>

namespace pap::learn {

namespace {

constexpr const char* kBias = "__bias__";
constexpr double kImprove = 1e-12;
constexpr int kMaxHalvings = 48;

using SpMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;

SpMat build_design(const std::vector<const Features*>& rows,
                   const std::map<std::string, int>& index) {
  std::vector<Eigen::Triplet<double>> trip;
  for (size_t i = 0; i < rows.size(); ++i)
    for (const auto& [name, v] : *rows[i]) {
      auto it = index.find(name);
      if (it != index.end() && v != 0.0)
        trip.emplace_back(static_cast<int>(i), it->second, v);
    }
  SpMat x(static_cast<int>(rows.size()), static_cast<int>(index.size()));
  x.setFromTriplets(trip.begin(), trip.end());
  return x;
}

// Row-wise softmax in place, numerically stabilized.
void softmax_rows(Eigen::MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Eigen::RowVectorXd r = m.row(i);
    r.array() -= r.maxCoeff();
    r = r.array().exp();
    m.row(i) = r / r.sum();
  }
}

}  // namespace

LinearModel LinearModel::train(const std::vector<Example>& data,
                               const TrainConfig& cfg) {
  if (data.empty()) throw std::invalid_argument("train: empty dataset");

  LinearModel m;
  m.seed_ = cfg.seed;

  std::set<std::string> seen_labels;
  for (const Example& e : data) seen_labels.insert(e.label);
  if (cfg.classes.empty()) {
    m.classes_.assign(seen_labels.begin(), seen_labels.end());
  } else {
    m.classes_ = cfg.classes;
    std::sort(m.classes_.begin(), m.classes_.end());
    for (const std::string& c : m.classes_)
      if (!seen_labels.count(c))
        throw std::invalid_argument("train: class has no examples: " + c);
    for (const std::string& l : seen_labels)
      if (!std::binary_search(m.classes_.begin(), m.classes_.end(), l))
        throw std::invalid_argument("train: label outside declared classes: " + l);
  }
  std::map<std::string, int> class_index;
  for (size_t i = 0; i < m.classes_.size(); ++i)
    class_index[m.classes_[i]] = static_cast<int>(i);

  std::set<std::string> names;
  for (const Example& e : data)
    for (const auto& kv : e.features) names.insert(kv.first);
  m.feature_names_.assign(names.begin(), names.end());
  for (size_t i = 0; i < m.feature_names_.size(); ++i)
    m.feature_index_[m.feature_names_[i]] = static_cast<int>(i);

  const int n = static_cast<int>(data.size());
  const int d = static_cast<int>(m.feature_names_.size());
  const int c = static_cast<int>(m.classes_.size());

  std::vector<const Features*> rows;
  rows.reserve(data.size());
  for (const Example& e : data) rows.push_back(&e.features);
  SpMat x = build_design(rows, m.feature_index_);

  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(n, c);
  for (int i = 0; i < n; ++i) y(i, class_index.at(data[i].label)) = 1.0;

  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(c, d);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(c);

  auto loss_at = [&](const Eigen::MatrixXd& wc, const Eigen::VectorXd& bc,
                     Eigen::MatrixXd* probs) {
    Eigen::MatrixXd scores = x * wc.transpose();
    scores.rowwise() += bc.transpose();
    Eigen::MatrixXd p = scores;
    softmax_rows(p);
    double nll = 0.0;
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < c; ++k)
        if (y(i, k) > 0.0) nll -= std::log(std::max(p(i, k), 1e-300));
    if (probs) *probs = std::move(p);
    return nll / n + 0.5 * cfg.l2 * wc.squaredNorm();
  };

  Eigen::MatrixXd p;
  double loss = loss_at(w, b, &p);
  m.losses_.push_back(loss);
  double step = cfg.step;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    Eigen::MatrixXd resid = p - y;  // n x c
    Eigen::MatrixXd grad_w =
        (resid.transpose() * x) / n + cfg.l2 * w;  // c x d
    Eigen::VectorXd grad_b = resid.colwise().sum().transpose() / n;

    bool accepted = false;
    for (int half = 0; half < kMaxHalvings; ++half) {
      Eigen::MatrixXd wt = w - step * grad_w;
      Eigen::VectorXd bt = b - step * grad_b;
      Eigen::MatrixXd pt;
      double lt = loss_at(wt, bt, &pt);
      if (lt <= loss - kImprove) {
        w = std::move(wt);
        b = std::move(bt);
        p = std::move(pt);
        loss = lt;
        accepted = true;
        step *= 1.25;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // converged: no descent step left
    m.losses_.push_back(loss);
  }

  m.w_ = std::move(w);
  m.b_ = std::move(b);
  return m;
}

Eigen::VectorXd LinearModel::densify(const Features& f) const {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(feature_count()));
  for (const auto& [name, val] : f) {
    auto it = feature_index_.find(name);
    if (it != feature_index_.end()) v[it->second] = val;
  }
  return v;
}

Eigen::VectorXd LinearModel::logits(const Eigen::VectorXd& dense) const {
  if (dense.size() != static_cast<Eigen::Index>(feature_count()))
    throw std::invalid_argument("logits: feature vector has size " +
                                std::to_string(dense.size()) + ", model expects " +
                                std::to_string(feature_count()));
  return w_ * dense + b_;
}

std::string LinearModel::predict(const Features& f) const {
  if (classes_.empty()) throw std::logic_error("predict: untrained model");
  Eigen::VectorXd s = logits(densify(f));
  Eigen::Index best = 0;
  s.maxCoeff(&best);
  return classes_[static_cast<size_t>(best)];
}

std::vector<std::pair<std::string, double>> LinearModel::predict_proba(
    const Features& f) const {
  if (classes_.empty()) throw std::logic_error("predict_proba: untrained model");
  Eigen::VectorXd s = logits(densify(f));
  s.array() -= s.maxCoeff();
  Eigen::VectorXd p = s.array().exp();
  p /= p.sum();
  std::vector<std::pair<std::string, double>> out;
  for (size_t i = 0; i < classes_.size(); ++i)
    out.emplace_back(classes_[i], p[static_cast<Eigen::Index>(i)]);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return out;
}

Json LinearModel::to_json() const {
  Json w = Json::object();
  for (size_t j = 0; j < feature_names_.size(); ++j) {
    Json col = Json::array();
    for (size_t k = 0; k < classes_.size(); ++k)
      col.push_back(w_(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)));
    w[feature_names_[j]] = std::move(col);
  }
  Json bias = Json::array();
  for (size_t k = 0; k < classes_.size(); ++k)
    bias.push_back(b_[static_cast<Eigen::Index>(k)]);
  return Json{{"format", "linear/1"},
              {"classes", classes_},
              {"bias", bias},
              {"weights", w},
              {"losses", losses_},
              {"seed", seed_}};
}

LinearModel LinearModel::from_json(const Json& j) {
  if (j.at("format") != "linear/1")
    throw std::invalid_argument("from_json: unknown model format");
  LinearModel m;
  m.classes_ = j.at("classes").get<std::vector<std::string>>();
  m.losses_ = j.at("losses").get<std::vector<double>>();
  m.seed_ = j.at("seed").get<uint64_t>();
  const Json& w = j.at("weights");
  for (auto it = w.begin(); it != w.end(); ++it)
    m.feature_names_.push_back(it.key());
  std::sort(m.feature_names_.begin(), m.feature_names_.end());
  for (size_t i = 0; i < m.feature_names_.size(); ++i)
    m.feature_index_[m.feature_names_[i]] = static_cast<int>(i);
  m.w_ = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m.classes_.size()),
                               static_cast<Eigen::Index>(m.feature_names_.size()));
  for (size_t jcol = 0; jcol < m.feature_names_.size(); ++jcol) {
    const Json& col = w.at(m.feature_names_[jcol]);
    for (size_t k = 0; k < m.classes_.size(); ++k)
      m.w_(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(jcol)) =
          col.at(k).get<double>();
  }
  m.b_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m.classes_.size()));
  const Json& bias = j.at("bias");
  for (size_t k = 0; k < m.classes_.size(); ++k)
    m.b_[static_cast<Eigen::Index>(k)] = bias.at(k).get<double>();
  return m;
}

PointerModel PointerModel::train(const std::vector<PointerExample>& data,
                                 const TrainConfig& cfg) {
  if (data.empty()) throw std::invalid_argument("train: empty dataset");
  for (const PointerExample& e : data) {
    if (e.candidates.empty())
      throw std::invalid_argument("train: pointer example with no candidates");
    if (e.gold < 0 || e.gold >= static_cast<int>(e.candidates.size()))
      throw std::invalid_argument("train: gold index out of range");
  }

  PointerModel m;
  std::set<std::string> names;
  names.insert(kBias);
  for (const PointerExample& e : data)
    for (const Features& f : e.candidates)
      for (const auto& kv : f) names.insert(kv.first);
  m.feature_names_.assign(names.begin(), names.end());
  for (size_t i = 0; i < m.feature_names_.size(); ++i)
    m.feature_index_[m.feature_names_[i]] = static_cast<int>(i);

  const int d = static_cast<int>(m.feature_names_.size());
  const int n = static_cast<int>(data.size());

  // Flatten every candidate row once; remember each example's row span.
  std::vector<const Features*> rows;
  std::vector<std::pair<int, int>> spans;  // (first row, count)
  for (const PointerExample& e : data) {
    spans.emplace_back(static_cast<int>(rows.size()),
                       static_cast<int>(e.candidates.size()));
    for (const Features& f : e.candidates) rows.push_back(&f);
  }
  SpMat x = build_design(rows, m.feature_index_);
  // The bias column: build_design skips it since examples never set it.
  const int bias_col = m.feature_index_.at(kBias);

  Eigen::VectorXd w = Eigen::VectorXd::Zero(d);

  auto loss_and_grad = [&](const Eigen::VectorXd& wc, Eigen::VectorXd* grad) {
    Eigen::VectorXd scores = x * wc;
    scores.array() += wc[bias_col];
    double nll = 0.0;
    Eigen::VectorXd coef = Eigen::VectorXd::Zero(scores.size());
    for (int i = 0; i < n; ++i) {
      auto [first, count] = spans[i];
      Eigen::VectorXd seg = scores.segment(first, count);
      seg.array() -= seg.maxCoeff();
      Eigen::VectorXd p = seg.array().exp();
      p /= p.sum();
      nll -= std::log(std::max(p[data[i].gold], 1e-300));
      if (grad) {
        coef.segment(first, count) = p;
        coef[first + data[i].gold] -= 1.0;
      }
    }
    double loss = nll / n + 0.5 * cfg.l2 * wc.squaredNorm();
    if (grad) {
      *grad = (x.transpose() * coef) / n + cfg.l2 * wc;
      (*grad)[bias_col] += coef.sum() / n;
    }
    return loss;
  };

  Eigen::VectorXd grad(d);
  double loss = loss_and_grad(w, &grad);
  m.losses_.push_back(loss);
  double step = cfg.step;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    bool accepted = false;
    for (int half = 0; half < kMaxHalvings; ++half) {
      Eigen::VectorXd wt = w - step * grad;
      double lt = loss_and_grad(wt, nullptr);
      if (lt <= loss - kImprove) {
        w = std::move(wt);
        loss = lt;
        accepted = true;
        step *= 1.25;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    m.losses_.push_back(loss);
    loss = loss_and_grad(w, &grad);
  }

  m.w_ = std::move(w);
  return m;
}

double PointerModel::score_one(const Features& f) const {
  double s = w_[feature_index_.at(kBias)];
  for (const auto& [name, v] : f) {
    auto it = feature_index_.find(name);
    if (it != feature_index_.end()) s += w_[it->second] * v;
  }
  return s;
}

std::vector<double> PointerModel::scores(
    const std::vector<Features>& candidates) const {
  if (candidates.empty())
    throw std::invalid_argument("scores: empty candidate list");
  Eigen::VectorXd s(static_cast<Eigen::Index>(candidates.size()));
  for (size_t i = 0; i < candidates.size(); ++i)
    s[static_cast<Eigen::Index>(i)] = score_one(candidates[i]);
  s.array() -= s.maxCoeff();
  Eigen::VectorXd p = s.array().exp();
  p /= p.sum();
  return {p.data(), p.data() + p.size()};
}

int PointerModel::predict(const std::vector<Features>& candidates) const {
  std::vector<double> p = scores(candidates);
  return static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin());
}

Json PointerModel::to_json() const {
  Json w = Json::object();
  for (size_t i = 0; i < feature_names_.size(); ++i)
    w[feature_names_[i]] = w_[static_cast<Eigen::Index>(i)];
  return Json{{"format", "pointer/1"}, {"weights", w}, {"losses", losses_}};
}

PointerModel PointerModel::from_json(const Json& j) {
  if (j.at("format") != "pointer/1")
    throw std::invalid_argument("from_json: unknown model format");
  PointerModel m;
  const Json& w = j.at("weights");
  for (auto it = w.begin(); it != w.end(); ++it)
    m.feature_names_.push_back(it.key());
  std::sort(m.feature_names_.begin(), m.feature_names_.end());
  for (size_t i = 0; i < m.feature_names_.size(); ++i)
    m.feature_index_[m.feature_names_[i]] = static_cast<int>(i);
  m.w_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m.feature_names_.size()));
  for (size_t i = 0; i < m.feature_names_.size(); ++i)
    m.w_[static_cast<Eigen::Index>(i)] = w.at(m.feature_names_[i]).get<double>();
  m.losses_ = j.at("losses").get<std::vector<double>>();
  return m;
}

}  // namespace pap::learn
