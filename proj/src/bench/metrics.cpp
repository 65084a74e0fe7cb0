#include <map>
#include <stdexcept>

#include "pap/bench.hpp"

namespace pap::bench {

std::string bucket_of(int gold_len) {
  if (gold_len <= 10) return "1-10";
  if (gold_len <= 20) return "11-20";
  return "21+";
}

Metrics aggregate(const std::vector<TaskSpec>& tasks,
                  const std::vector<EpisodeOutcome>& outcomes) {
  if (tasks.size() != outcomes.size())
    throw std::invalid_argument("aggregate: tasks and outcomes differ in size");
  Metrics m;
  m.n = static_cast<int>(tasks.size());
  if (m.n == 0) return m;

  std::map<std::string, int> bucket_hits;
  std::map<std::string, std::pair<int, int>> kind_q;  // kind -> (correct, n)
  double ssr_sum = 0;
  int successes = 0, q_correct = 0;

  for (size_t i = 0; i < tasks.size(); ++i) {
    const TaskSpec& t = tasks[i];
    const EpisodeOutcome& o = outcomes[i];
    if (o.success) ++successes;
    ssr_sum += o.subgoals_total > 0
                   ? static_cast<double>(o.subgoals_hit) / o.subgoals_total
                   : 0.0;
    std::string b = bucket_of(t.gold_len);
    ++m.bucket_n[b];
    if (o.success) ++bucket_hits[b];
    if (is_question(t.kind)) {
      ++m.n_questions;
      bool correct = !o.answer.empty() && o.answer == t.answer;
      if (correct) ++q_correct;
      auto& [c, n] = kind_q[kind_name(t.kind)];
      if (correct) ++c;
      ++n;
    }
    if (!o.success) ++m.cause_counts[cause_name(o.cause)];
  }

  m.sr = static_cast<double>(successes) / m.n;
  m.ssr = ssr_sum / m.n;
  if (m.n_questions > 0)
    m.answer_acc = static_cast<double>(q_correct) / m.n_questions;
  for (const auto& [kind, cn] : kind_q)
    m.kind_answer_acc[kind] = static_cast<double>(cn.first) / cn.second;
  for (const auto& [b, n] : m.bucket_n)
    m.bucket_sr[b] = static_cast<double>(bucket_hits[b]) / n;
  return m;
}

Json metrics_to_json(const Metrics& m) {
  Json j;
  j["n"] = m.n;
  j["sr"] = m.sr;
  j["ssr"] = m.ssr;
  j["n_questions"] = m.n_questions;
  j["answer_acc"] = m.answer_acc;
  j["kind_answer_acc"] = m.kind_answer_acc;
  j["bucket_sr"] = m.bucket_sr;
  j["bucket_n"] = m.bucket_n;
  j["cause_counts"] = m.cause_counts;
  return j;
}

}  // namespace pap::bench
