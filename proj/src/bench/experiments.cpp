#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <numeric>
#include <set>
#include <stdexcept>
#include <thread>

#include "internal.hpp"
#include "pap/bench.hpp"
#include "pap/common.hpp"
#include "pap/interp/reactors.hpp"
#include "pap/presearch.hpp"

namespace pap::bench {

namespace {

using interp::NoiseSpec;

constexpr const char* kCsvHeader = "design,section,split,seed,arm,metric,value";

int pick_threads(int requested, size_t n) {
  unsigned hw = std::thread::hardware_concurrency();
  int t = requested > 0 ? requested : static_cast<int>(std::min(hw ? hw : 4u, 8u));
  return std::max(1, std::min<int>(t, static_cast<int>(n)));
}

// Work-stealing-free indexed pool: deterministic because every slot is
// written independently of scheduling. The first exception wins and cancels
// the remaining work.
template <typename Fn>
void parallel_for(size_t n, int threads, Fn&& fn) {
  if (n == 0) return;
  int nt = pick_threads(threads, n);
  if (nt <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::exception_ptr first_error;
  std::mutex err_mu;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(nt));
  for (int w = 0; w < nt; ++w) {
    pool.emplace_back([&] {
      while (true) {
        size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mu);
          if (!first_error) first_error = std::current_exception();
          next.store(n);
          return;
        }
      }
    });
  }
  for (std::thread& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

std::string hex64(uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string fmt_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void add_row(std::vector<std::string>* csv, const std::string& design,
             const std::string& section, const std::string& split, uint64_t seed,
             const std::string& arm, const std::string& metric, double value) {
  csv->push_back(design + "," + section + "," + split + "," +
                 std::to_string(seed) + "," + arm + "," + metric + "," +
                 fmt_num(value));
}

std::vector<TaskKind> hh_kinds() {
  return {TaskKind::hh_pick_place, TaskKind::hh_pick_two_place,
          TaskKind::hh_clean_place, TaskKind::hh_heat_place,
          TaskKind::hh_cool_place, TaskKind::hh_slice_place,
          TaskKind::hh_examine_light};
}

std::vector<TaskKind> iqa_kinds() {
  return {TaskKind::iqa_existence, TaskKind::iqa_count, TaskKind::iqa_contain};
}

std::vector<TaskSpec> gen_suite(std::vector<TaskKind> kinds, int per_kind,
                                const std::string& profile, uint64_t seed) {
  SuiteConfig sc;
  sc.kinds = std::move(kinds);
  sc.per_kind = per_kind;
  sc.profile = profile;
  sc.seed = seed;
  return generate_suite(sc);
}

// Object grounding through the pre-search record (the hand-built finder),
// composed under the learned attribute/relation models. This is the
// oracle-grounding arm: location queries stay grounded in the scan, state
// queries go through what was learned from the gold traces.
struct PresearchFind : interp::Reactor {
  interp::ReactorRegistry heur = interp::heuristic_registry();
  interp::Value query(const std::vector<interp::Value>& args,
                      const interp::EnvSession& s) const override {
    return heur.query("find_obj_recep", args, s);
  }
};

interp::ReactorRegistry hmn_registry(
    std::shared_ptr<const learn::ReactorModels> models) {
  interp::ReactorRegistry reg = learn::learned_registry(std::move(models));
  auto find = std::make_shared<PresearchFind>();
  reg.add("find_recep", find);
  reg.add("find_obj_recep", find);
  return reg;
}

Json metrics_pair_json(const Metrics& seen, const Metrics& unseen) {
  return Json{{"seen", metrics_to_json(seen)}, {"unseen", metrics_to_json(unseen)}};
}

// ---------------------------------------------------------------------------
// One household round: fresh suites, both arms trained on the same data,
// evaluated on both splits.

struct HhRound {
  uint64_t seed = 0;
  std::vector<TaskSpec> train, seen, unseen;
  std::vector<EpisodeOutcome> hmn_seen_out, hmn_unseen_out;
  std::vector<EpisodeOutcome> flat_seen_out, flat_unseen_out;
  Metrics hmn_seen, hmn_unseen, flat_seen, flat_unseen;
};

HhRound run_hh_round(const ExperimentConfig& cfg, uint64_t rs) {
  HhRound r;
  r.seed = rs;
  r.train = gen_suite(hh_kinds(), cfg.hh_train_per_kind, "train", mix_seed(rs, 1));
  r.seen = gen_suite(hh_kinds(), cfg.hh_eval_per_kind, "eval_seen", mix_seed(rs, 2));
  r.unseen =
      gen_suite(hh_kinds(), cfg.hh_eval_per_kind, "eval_unseen", mix_seed(rs, 3));

  TrainedHmn th = train_hmn_arm(r.train, mix_seed(rs, 11), cfg.threads);
  baseline::ReactiveModel flat =
      train_reactive_arm(r.train, NoiseSpec{}, mix_seed(rs, 12), cfg.threads);

  HmnArm ha;
  ha.program = &merged_program();
  ha.registry = hmn_registry(th.reactors);
  ha.hh_planner = &th.planner;
  ha.noise = NoiseSpec{0, 0, mix_seed(rs, 21)};
  ReactiveArm fa{&flat, nullptr, NoiseSpec{0, 0, mix_seed(rs, 22)}};

  auto run_h = [&](const std::vector<TaskSpec>& ts) {
    return run_episodes(
        ts, [&](const TaskSpec& t) { return run_hmn(t, ha); }, cfg.threads);
  };
  auto run_f = [&](const std::vector<TaskSpec>& ts) {
    return run_episodes(
        ts, [&](const TaskSpec& t) { return run_reactive_episode(t, fa); },
        cfg.threads);
  };
  r.hmn_seen_out = run_h(r.seen);
  r.hmn_unseen_out = run_h(r.unseen);
  r.flat_seen_out = run_f(r.seen);
  r.flat_unseen_out = run_f(r.unseen);
  r.hmn_seen = aggregate(r.seen, r.hmn_seen_out);
  r.hmn_unseen = aggregate(r.unseen, r.hmn_unseen_out);
  r.flat_seen = aggregate(r.seen, r.flat_seen_out);
  r.flat_unseen = aggregate(r.unseen, r.flat_unseen_out);
  return r;
}

// ---------------------------------------------------------------------------
// Designs

Json head_to_head(const ExperimentConfig& cfg, std::vector<std::string>* csv) {
  if (cfg.seeds < 1)
    throw std::invalid_argument("head_to_head: seeds must be positive");

  Json hh;
  Json rounds = Json::array();
  std::vector<HhRound> rs;
  rs.reserve(static_cast<size_t>(cfg.seeds));
  for (int k = 0; k < cfg.seeds; ++k)
    rs.push_back(run_hh_round(cfg, mix_seed(cfg.seed, 101 + k)));

  double min_gap_seen = 1.0, min_gap_unseen = 1.0;
  for (const HhRound& r : rs) {
    double gap_seen = r.hmn_seen.sr - r.flat_seen.sr;
    double gap_unseen = r.hmn_unseen.sr - r.flat_unseen.sr;
    min_gap_seen = std::min(min_gap_seen, gap_seen);
    min_gap_unseen = std::min(min_gap_unseen, gap_unseen);
    Json jr;
    jr["seed"] = r.seed;
    jr["train_n"] = r.train.size();
    jr["hmn"] = metrics_pair_json(r.hmn_seen, r.hmn_unseen);
    jr["reactive"] = metrics_pair_json(r.flat_seen, r.flat_unseen);
    jr["gap"] = Json{{"seen", gap_seen}, {"unseen", gap_unseen}};
    rounds.push_back(std::move(jr));
    for (const char* split : {"seen", "unseen"}) {
      bool s = std::string(split) == "seen";
      add_row(csv, cfg.design, "household", split, r.seed, "hmn", "sr",
              s ? r.hmn_seen.sr : r.hmn_unseen.sr);
      add_row(csv, cfg.design, "household", split, r.seed, "hmn", "ssr",
              s ? r.hmn_seen.ssr : r.hmn_unseen.ssr);
      add_row(csv, cfg.design, "household", split, r.seed, "reactive", "sr",
              s ? r.flat_seen.sr : r.flat_unseen.sr);
      add_row(csv, cfg.design, "household", split, r.seed, "reactive", "ssr",
              s ? r.flat_seen.ssr : r.flat_unseen.ssr);
      add_row(csv, cfg.design, "household", split, r.seed, "gap", "sr",
              s ? gap_seen : gap_unseen);
    }
  }
  hh["rounds"] = std::move(rounds);
  hh["min_gap"] = Json{{"seen", min_gap_seen}, {"unseen", min_gap_unseen}};

  // Length buckets pooled over every seed's unseen split, so the long tail
  // has enough mass per bucket.
  std::vector<TaskSpec> pooled;
  std::vector<EpisodeOutcome> pooled_h, pooled_f;
  for (const HhRound& r : rs) {
    pooled.insert(pooled.end(), r.unseen.begin(), r.unseen.end());
    pooled_h.insert(pooled_h.end(), r.hmn_unseen_out.begin(),
                    r.hmn_unseen_out.end());
    pooled_f.insert(pooled_f.end(), r.flat_unseen_out.begin(),
                    r.flat_unseen_out.end());
  }
  Metrics ph = aggregate(pooled, pooled_h);
  Metrics pf = aggregate(pooled, pooled_f);
  Json gap_by_bucket;
  for (const auto& [b, n] : ph.bucket_n) {
    double g = ph.bucket_sr[b] - pf.bucket_sr[b];
    gap_by_bucket[b] = g;
    add_row(csv, cfg.design, "household_buckets", "unseen", cfg.seed, "hmn",
            "sr_" + b, ph.bucket_sr[b]);
    add_row(csv, cfg.design, "household_buckets", "unseen", cfg.seed, "reactive",
            "sr_" + b, pf.bucket_sr[b]);
    add_row(csv, cfg.design, "household_buckets", "unseen", cfg.seed, "gap",
            "sr_" + b, g);
  }
  hh["pooled_unseen"] =
      Json{{"hmn", metrics_to_json(ph)}, {"reactive", metrics_to_json(pf)},
           {"gap_by_bucket", gap_by_bucket}};

  // Question benchmark: untrained hierarchical stack (rule planner plus
  // hand-built reactors) against a reactive model trained on the same noisy
  // channel it is evaluated under.
  uint64_t s0 = mix_seed(cfg.seed, 77);
  std::vector<TaskSpec> qtrain =
      gen_suite(iqa_kinds(), cfg.iqa_train_per_type, "train", mix_seed(s0, 1));
  std::vector<TaskSpec> qseen =
      gen_suite(iqa_kinds(), cfg.iqa_eval_per_type, "eval_seen", mix_seed(s0, 2));
  std::vector<TaskSpec> qunseen = gen_suite(iqa_kinds(), cfg.iqa_eval_per_type,
                                            "eval_unseen", mix_seed(s0, 3));
  NoiseSpec qn{cfg.epsilon, 0, mix_seed(s0, 9)};
  baseline::ReactiveModel qflat =
      train_reactive_arm(qtrain, qn, mix_seed(s0, 12), cfg.threads);

  HmnArm qa;
  qa.program = &merged_program();
  qa.registry = interp::heuristic_registry();
  qa.noise = qn;
  ReactiveArm qf{nullptr, &qflat, qn};

  auto run_q = [&](const std::vector<TaskSpec>& ts, bool hmn) {
    return run_episodes(
        ts,
        [&, hmn](const TaskSpec& t) {
          return hmn ? run_hmn(t, qa) : run_reactive_episode(t, qf);
        },
        cfg.threads);
  };
  Metrics qh_seen = aggregate(qseen, run_q(qseen, true));
  Metrics qh_unseen = aggregate(qunseen, run_q(qunseen, true));
  Metrics qf_seen = aggregate(qseen, run_q(qseen, false));
  Metrics qf_unseen = aggregate(qunseen, run_q(qunseen, false));

  Json q;
  q["seed"] = s0;
  q["epsilon"] = cfg.epsilon;
  q["train_per_type"] = cfg.iqa_train_per_type;
  q["hmn"] = metrics_pair_json(qh_seen, qh_unseen);
  q["reactive"] = metrics_pair_json(qf_seen, qf_unseen);
  Json type_gap;
  double min_type_gap = 1.0;
  for (TaskKind k : iqa_kinds()) {
    std::string name = kind_name(k);
    double hmn_acc = qh_unseen.kind_answer_acc.count(name)
                         ? qh_unseen.kind_answer_acc.at(name)
                         : 0.0;
    double flat_acc = qf_unseen.kind_answer_acc.count(name)
                          ? qf_unseen.kind_answer_acc.at(name)
                          : 0.0;
    double g = hmn_acc - flat_acc;
    type_gap[name] = g;
    min_type_gap = std::min(min_type_gap, g);
    add_row(csv, cfg.design, "questions", "unseen", s0, "hmn", "acc_" + name,
            hmn_acc);
    add_row(csv, cfg.design, "questions", "unseen", s0, "reactive",
            "acc_" + name, flat_acc);
    add_row(csv, cfg.design, "questions", "unseen", s0, "gap", "acc_" + name, g);
  }
  q["unseen_type_gap"] = type_gap;
  q["min_type_gap"] = min_type_gap;
  add_row(csv, cfg.design, "questions", "unseen", s0, "hmn", "answer_acc",
          qh_unseen.answer_acc);
  add_row(csv, cfg.design, "questions", "unseen", s0, "reactive", "answer_acc",
          qf_unseen.answer_acc);

  Json out;
  out["household"] = std::move(hh);
  out["questions"] = std::move(q);
  return out;
}

Json data_efficiency(const ExperimentConfig& cfg, std::vector<std::string>* csv) {
  if (cfg.seeds < 1)
    throw std::invalid_argument("data_efficiency: seeds must be positive");
  std::vector<double> fractions = cfg.fractions;
  std::sort(fractions.begin(), fractions.end());
  if (fractions.empty() || fractions.front() <= 0 || fractions.back() > 1.0)
    throw std::invalid_argument("data_efficiency: fractions must lie in (0, 1]");

  Json rounds = Json::array();
  bool monotone = true;
  for (int k = 0; k < cfg.seeds; ++k) {
    uint64_t rs = mix_seed(cfg.seed, 201 + k);
    std::vector<TaskSpec> full =
        gen_suite(hh_kinds(), cfg.hh_train_per_kind, "train", mix_seed(rs, 1));
    std::vector<TaskSpec> eval_seen =
        gen_suite(hh_kinds(), cfg.hh_eval_per_kind, "eval_seen", mix_seed(rs, 2));

    std::vector<size_t> order(full.size());
    std::iota(order.begin(), order.end(), size_t{0});
    Rng shuffle_rng(mix_seed(rs, 4));
    shuffle_rng.shuffle(order);

    Json points = Json::array();
    double last_pool_acc = -1.0;
    std::map<double, double> hmn_at, flat_at;
    for (size_t fi = 0; fi < fractions.size(); ++fi) {
      double f = fractions[fi];
      size_t n = std::clamp<size_t>(
          static_cast<size_t>(std::lround(f * static_cast<double>(full.size()))),
          1, full.size());
      std::vector<TaskSpec> subset;
      subset.reserve(n);
      for (size_t i = 0; i < n; ++i) subset.push_back(full[order[i]]);

      TrainedHmn th = train_hmn_arm(subset, mix_seed(rs, 11 + fi), cfg.threads);
      baseline::ReactiveModel flat = train_reactive_arm(
          subset, NoiseSpec{}, mix_seed(rs, 31 + fi), cfg.threads);

      HmnArm ha;
      ha.program = &merged_program();
      ha.registry = hmn_registry(th.reactors);
      ha.hh_planner = &th.planner;
      ha.noise = NoiseSpec{0, 0, mix_seed(rs, 21)};
      ReactiveArm fa{&flat, nullptr, NoiseSpec{0, 0, mix_seed(rs, 22)}};

      Metrics mh = aggregate(
          eval_seen, run_episodes(
                         eval_seen,
                         [&](const TaskSpec& t) { return run_hmn(t, ha); },
                         cfg.threads));
      Metrics mf = aggregate(
          eval_seen,
          run_episodes(
              eval_seen,
              [&](const TaskSpec& t) { return run_reactive_episode(t, fa); },
              cfg.threads));

      // Training-pool fit of the planner alone: decoded program against the
      // gold over the full pool, including the withheld part.
      int hit = 0;
      for (const TaskSpec& t : full) {
        try {
          if (interp::ae_to_json(planner::plan(th.planner, t.instruction)) ==
              interp::ae_to_json(t.gold))
            ++hit;
        } catch (const std::exception&) {
        }
      }
      double pool_acc = static_cast<double>(hit) / static_cast<double>(full.size());
      if (pool_acc + 1e-9 < last_pool_acc) monotone = false;
      last_pool_acc = std::max(last_pool_acc, pool_acc);

      hmn_at[f] = mh.sr;
      flat_at[f] = mf.sr;
      points.push_back(Json{{"fraction", f},
                            {"train_n", n},
                            {"hmn_sr", mh.sr},
                            {"reactive_sr", mf.sr},
                            {"planner_pool_acc", pool_acc}});
      add_row(csv, cfg.design, "curve", "seen", rs, "hmn",
              "sr@" + fmt_num(f), mh.sr);
      add_row(csv, cfg.design, "curve", "seen", rs, "reactive",
              "sr@" + fmt_num(f), mf.sr);
      add_row(csv, cfg.design, "curve", "seen", rs, "hmn",
              "pool_acc@" + fmt_num(f), pool_acc);
    }

    Json jr;
    jr["seed"] = rs;
    jr["points"] = std::move(points);
    if (hmn_at.count(0.2) && hmn_at.count(1.0)) {
      double full_sr = hmn_at.at(1.0);
      double ratio = full_sr > 0 ? hmn_at.at(0.2) / full_sr : 0.0;
      jr["retention"] = Json{{"hmn_sr_20", hmn_at.at(0.2)},
                             {"hmn_sr_full", full_sr},
                             {"hmn_ratio_20", ratio},
                             {"reactive_sr_20", flat_at.at(0.2)}};
      add_row(csv, cfg.design, "retention", "seen", rs, "hmn", "ratio_20", ratio);
      add_row(csv, cfg.design, "retention", "seen", rs, "reactive", "sr_20",
              flat_at.at(0.2));
    }
    rounds.push_back(std::move(jr));
  }

  Json out;
  out["rounds"] = std::move(rounds);
  out["planner_pool_acc_monotone"] = monotone;
  return out;
}

Json few_shot(const ExperimentConfig& cfg, std::vector<std::string>* csv) {
  uint64_t rs = mix_seed(cfg.seed, 301);
  std::vector<TaskSpec> train =
      gen_suite(hh_kinds(), cfg.hh_train_per_kind, "train", mix_seed(rs, 1));
  std::vector<TaskSpec> eval_seen =
      gen_suite(hh_kinds(), cfg.hh_eval_per_kind, "eval_seen", mix_seed(rs, 2));

  auto form_of = [](const TaskSpec& t) {
    std::string f;
    for (const interp::CallEntry& c : t.gold)
      f += (f.empty() ? "" : ";") + c.name;
    return f;
  };

  std::map<std::string, std::vector<size_t>> by_form;  // train indices
  std::map<std::string, std::pair<double, int>> len_of;  // sum, n
  for (size_t i = 0; i < train.size(); ++i) {
    std::string f = form_of(train[i]);
    by_form[f].push_back(i);
    len_of[f].first += train[i].gold_len;
    len_of[f].second += 1;
  }
  std::vector<std::string> forms;
  for (const auto& [f, idx] : by_form) forms.push_back(f);
  if (cfg.few_shot_n < 1 || cfg.few_shot_n >= static_cast<int>(forms.size()))
    throw std::invalid_argument(
        "few_shot: held-out form count must be below the distinct form count");

  auto run_holdout = [&](const std::set<std::string>& held, uint64_t seed2) {
    std::map<std::string, int> kept;
    std::vector<TaskSpec> limited;
    for (const TaskSpec& t : train) {
      std::string f = form_of(t);
      if (!held.count(f)) {
        limited.push_back(t);
      } else if (kept[f] < cfg.few_shot_cap) {
        limited.push_back(t);
        ++kept[f];
      }
    }
    std::vector<TaskSpec> eval_held;
    for (const TaskSpec& t : eval_seen)
      if (held.count(form_of(t))) eval_held.push_back(t);
    if (eval_held.empty())
      throw std::runtime_error("few_shot: no eval tasks for the held forms");

    TrainedHmn th = train_hmn_arm(limited, mix_seed(seed2, 1), cfg.threads);
    baseline::ReactiveModel flat = train_reactive_arm(
        limited, NoiseSpec{}, mix_seed(seed2, 2), cfg.threads);
    HmnArm ha;
    ha.program = &merged_program();
    ha.registry = hmn_registry(th.reactors);
    ha.hh_planner = &th.planner;
    ha.noise = NoiseSpec{0, 0, mix_seed(seed2, 3)};
    ReactiveArm fa{&flat, nullptr, NoiseSpec{0, 0, mix_seed(seed2, 4)}};
    Metrics mh = aggregate(
        eval_held,
        run_episodes(
            eval_held, [&](const TaskSpec& t) { return run_hmn(t, ha); },
            cfg.threads));
    Metrics mf = aggregate(
        eval_held,
        run_episodes(
            eval_held,
            [&](const TaskSpec& t) { return run_reactive_episode(t, fa); },
            cfg.threads));
    return std::pair<Metrics, Metrics>{mh, mf};
  };

  Json out;
  out["seed"] = rs;
  out["forms"] = forms;
  out["shots_cap"] = cfg.few_shot_cap;

  Json rand_runs = Json::array();
  double rand_h = 0, rand_f = 0;
  for (int s = 0; s < cfg.few_shot_splits; ++s) {
    std::vector<std::string> shuffled = forms;
    Rng rng(mix_seed(rs, 40 + s));
    rng.shuffle(shuffled);
    std::set<std::string> held(shuffled.begin(),
                               shuffled.begin() + cfg.few_shot_n);
    auto [mh, mf] = run_holdout(held, mix_seed(rs, 50 + s));
    rand_h += mh.sr;
    rand_f += mf.sr;
    rand_runs.push_back(Json{{"held", std::vector<std::string>(held.begin(), held.end())},
                             {"hmn_sr", mh.sr},
                             {"reactive_sr", mf.sr},
                             {"eval_n", mh.n}});
    add_row(csv, cfg.design, "random_n", "seen", mix_seed(rs, 50 + s), "hmn",
            "sr", mh.sr);
    add_row(csv, cfg.design, "random_n", "seen", mix_seed(rs, 50 + s),
            "reactive", "sr", mf.sr);
  }
  rand_h /= cfg.few_shot_splits;
  rand_f /= cfg.few_shot_splits;
  out["random_n"] = Json{{"runs", std::move(rand_runs)},
                         {"hmn_sr", rand_h},
                         {"reactive_sr", rand_f},
                         {"gap", rand_h - rand_f}};
  add_row(csv, cfg.design, "random_n", "seen", rs, "hmn", "mean_sr", rand_h);
  add_row(csv, cfg.design, "random_n", "seen", rs, "reactive", "mean_sr", rand_f);

  std::vector<std::string> by_len = forms;
  std::sort(by_len.begin(), by_len.end(), [&](const std::string& a,
                                              const std::string& b) {
    double la = len_of[a].first / len_of[a].second;
    double lb = len_of[b].first / len_of[b].second;
    if (la != lb) return la > lb;
    return a < b;
  });
  std::set<std::string> longest(by_len.begin(), by_len.begin() + cfg.few_shot_n);
  auto [lh, lf] = run_holdout(longest, mix_seed(rs, 60));
  out["longest_n"] = Json{
      {"held", std::vector<std::string>(longest.begin(), longest.end())},
      {"hmn_sr", lh.sr},
      {"reactive_sr", lf.sr},
      {"gap", lh.sr - lf.sr},
      {"eval_n", lh.n}};
  add_row(csv, cfg.design, "longest_n", "seen", rs, "hmn", "sr", lh.sr);
  add_row(csv, cfg.design, "longest_n", "seen", rs, "reactive", "sr", lf.sr);
  return out;
}

Json library_ab(const ExperimentConfig& cfg, std::vector<std::string>* csv) {
  if (cfg.ab_tasks < 2)
    throw std::invalid_argument("library_ab: need at least two tasks");
  static const std::vector<std::string> kPool = {
      "mug", "egg", "apple", "potato", "tomato",
      "bread", "cd", "book", "plate", "fork"};
  static const char* kStyles[4] = {"s0", "s1", "s2", "s3"};

  // Containment questions on scenes where at least one receptacle has no
  // line of sight from the start pose; yes-cases hide the answer inside one
  // of those. The first-generation search never finds them.
  std::vector<TaskSpec> tasks;
  const int max_attempts = cfg.ab_tasks * 200;
  for (int attempt = 0; static_cast<int>(tasks.size()) < cfg.ab_tasks &&
                        attempt < max_attempts;
       ++attempt) {
    uint64_t s = mix_seed(cfg.seed, 7000 + static_cast<uint64_t>(attempt));
    Rng rng(s);
    SceneConfig sc;
    sc.force_closed = true;
    sc.style_id = kStyles[attempt % 4];
    std::string o = kPool[rng.index(kPool.size())];
    sc.require_movables = {o};
    uint64_t scene_seed = mix_seed(s, 0x5deece66dULL);
    SceneState scene;
    try {
      scene = generate_scene(sc, scene_seed);
    } catch (const std::runtime_error&) {
      continue;
    }
    std::set<std::string> hidden;
    for (const std::string& id : hidden_from_start(scene)) {
      const ObjectInstance* inst = scene.find(id);
      if (inst != nullptr && class_info(inst->class_name).is_receptacle)
        hidden.insert(id);
    }
    if (hidden.empty()) continue;

    std::string container_id, container_class;
    for (const auto& [id, obj] : scene.objects) {
      if (obj.class_name != o) continue;
      if (obj.location.kind != ObjectLocation::Kind::in_receptacle) break;
      container_id = obj.location.receptacle_id;
      container_class = scene.find(container_id)->class_name;
      break;
    }
    if (container_id.empty()) continue;

    bool want_yes = tasks.size() % 2 == 0;
    std::string recep;
    if (want_yes) {
      if (!hidden.count(container_id)) continue;
      recep = container_class;
    } else {
      std::vector<std::string> cand;
      for (const auto& [id, obj] : scene.objects)
        if (class_info(obj.class_name).is_receptacle &&
            obj.class_name != container_class)
          cand.push_back(obj.class_name);
      if (cand.empty()) continue;
      recep = cand[rng.index(cand.size())];
    }

    TaskSpec t;
    t.kind = TaskKind::iqa_contain;
    t.scene = sc;
    t.scene_seed = scene_seed;
    t.split = "seen";
    t.answer = want_yes ? "yes" : "no";
    t.obj_class = o;
    t.recep_class = recep;
    t.instruction = planner::make_instruction(
        "is there a " + o + " in the " + recep + "?", "iqa.cn.t0");
    t.gold = planner::rule_plan(t.instruction);
    if (!verify_gold(t)) continue;
    t.id = "iqa_contain/ab/" + std::to_string(tasks.size());
    tasks.push_back(std::move(t));
  }
  if (static_cast<int>(tasks.size()) < cfg.ab_tasks)
    throw std::runtime_error("library_ab: built only " +
                             std::to_string(tasks.size()) + " of " +
                             std::to_string(cfg.ab_tasks) +
                             " hidden-receptacle tasks");

  LibraryBundle first = load_builtin("iqa/v0.1");
  LibraryBundle full = load_builtin("iqa/v1");
  NoiseSpec ns{0, 0, mix_seed(cfg.seed, 8)};

  auto eval_arm = [&](const dsl::Program& prog) {
    HmnArm arm;
    arm.program = &prog;
    arm.registry = interp::heuristic_registry();
    arm.noise = ns;
    return run_episodes(
        tasks, [&](const TaskSpec& t) { return run_hmn(t, arm); }, cfg.threads);
  };
  std::vector<EpisodeOutcome> out0 = eval_arm(first.program);
  std::vector<EpisodeOutcome> out1 = eval_arm(full.program);
  Metrics m0 = aggregate(tasks, out0);
  Metrics m1 = aggregate(tasks, out1);

  // Paired bootstrap over the per-task accuracy difference.
  size_t n = tasks.size();
  std::vector<double> diff(n);
  for (size_t i = 0; i < n; ++i)
    diff[i] = (out1[i].success ? 1.0 : 0.0) - (out0[i].success ? 1.0 : 0.0);
  int b_count = std::max(1, cfg.bootstrap);
  std::vector<double> means(static_cast<size_t>(b_count));
  Rng brng(mix_seed(cfg.seed, 999));
  for (int b = 0; b < b_count; ++b) {
    double acc = 0;
    for (size_t i = 0; i < n; ++i) acc += diff[brng.index(n)];
    means[static_cast<size_t>(b)] = acc / static_cast<double>(n);
  }
  std::sort(means.begin(), means.end());
  auto quantile = [&](double q) {
    double pos = q * static_cast<double>(means.size() - 1);
    return means[static_cast<size_t>(std::lround(pos))];
  };
  double improvement = m1.answer_acc - m0.answer_acc;

  Json out;
  out["n_tasks"] = n;
  out["arms"] = Json::array({Json{{"library", first.id},
                                  {"metrics", metrics_to_json(m0)}},
                             Json{{"library", full.id},
                                  {"metrics", metrics_to_json(m1)}}});
  out["improvement"] = Json{{"mean", improvement},
                            {"ci_lo", quantile(0.025)},
                            {"ci_hi", quantile(0.975)},
                            {"bootstrap", b_count}};
  out["library_diff"] = diff_to_json(diff_bundles(first, full));
  add_row(csv, cfg.design, "contain", "seen", cfg.seed, first.id, "answer_acc",
          m0.answer_acc);
  add_row(csv, cfg.design, "contain", "seen", cfg.seed, full.id, "answer_acc",
          m1.answer_acc);
  add_row(csv, cfg.design, "contain", "seen", cfg.seed, "gap", "answer_acc",
          improvement);
  add_row(csv, cfg.design, "contain", "seen", cfg.seed, "gap", "ci_lo",
          quantile(0.025));
  add_row(csv, cfg.design, "contain", "seen", cfg.seed, "gap", "ci_hi",
          quantile(0.975));
  return out;
}

Json perception_sweep(const ExperimentConfig& cfg,
                      std::vector<std::string>* csv) {
  if (cfg.epsilons.empty())
    throw std::invalid_argument("perception_sweep: no epsilons given");
  uint64_t s0 = mix_seed(cfg.seed, 401);
  std::vector<TaskSpec> train =
      gen_suite(iqa_kinds(), cfg.sweep_train_per_type, "train", mix_seed(s0, 1));
  std::vector<TaskSpec> eval_unseen = gen_suite(
      iqa_kinds(), cfg.sweep_eval_per_type, "eval_unseen", mix_seed(s0, 2));

  Json points = Json::array();
  for (size_t ei = 0; ei < cfg.epsilons.size(); ++ei) {
    double eps = cfg.epsilons[ei];
    NoiseSpec ns{eps, 0, mix_seed(s0, 9 + ei)};
    baseline::ReactiveModel flat =
        train_reactive_arm(train, ns, mix_seed(s0, 12 + ei), cfg.threads);
    HmnArm hz;
    hz.program = &merged_program();
    hz.registry = interp::heuristic_registry();
    hz.noise = ns;
    ReactiveArm fa{nullptr, &flat, ns};
    Metrics mh = aggregate(
        eval_unseen, run_episodes(
                         eval_unseen,
                         [&](const TaskSpec& t) { return run_hmn(t, hz); },
                         cfg.threads));
    Metrics mf = aggregate(
        eval_unseen,
        run_episodes(
            eval_unseen,
            [&](const TaskSpec& t) { return run_reactive_episode(t, fa); },
            cfg.threads));
    points.push_back(Json{{"epsilon", eps},
                          {"hmn_answer_acc", mh.answer_acc},
                          {"reactive_answer_acc", mf.answer_acc}});
    add_row(csv, cfg.design, "sweep", "unseen", s0, "hmn",
            "acc@" + fmt_num(eps), mh.answer_acc);
    add_row(csv, cfg.design, "sweep", "unseen", s0, "reactive",
            "acc@" + fmt_num(eps), mf.answer_acc);
  }
  Json out;
  out["seed"] = s0;
  out["points"] = std::move(points);
  return out;
}

Json length_buckets(const ExperimentConfig& cfg, std::vector<std::string>* csv) {
  HhRound r = run_hh_round(cfg, mix_seed(cfg.seed, 101));
  Json out;
  out["seed"] = r.seed;
  struct SplitRef {
    const char* name;
    const Metrics* hmn;
    const Metrics* flat;
  };
  for (const SplitRef& s :
       {SplitRef{"seen", &r.hmn_seen, &r.flat_seen},
        SplitRef{"unseen", &r.hmn_unseen, &r.flat_unseen}}) {
    Json block;
    block["hmn_bucket_sr"] = s.hmn->bucket_sr;
    block["reactive_bucket_sr"] = s.flat->bucket_sr;
    block["bucket_n"] = s.hmn->bucket_n;
    Json gap;
    for (const auto& [b, sr] : s.hmn->bucket_sr) {
      double fsr = s.flat->bucket_sr.count(b) ? s.flat->bucket_sr.at(b) : 0.0;
      gap[b] = sr - fsr;
      add_row(csv, cfg.design, "buckets", s.name, r.seed, "hmn", "sr_" + b, sr);
      add_row(csv, cfg.design, "buckets", s.name, r.seed, "reactive", "sr_" + b,
              fsr);
      add_row(csv, cfg.design, "buckets", s.name, r.seed, "gap", "sr_" + b,
              sr - fsr);
    }
    block["gap"] = std::move(gap);
    out[s.name] = std::move(block);
  }
  return out;
}

ExperimentReport finish_report(const ExperimentConfig& cfg, Json summary,
                               std::vector<std::string> csv) {
  ExperimentReport rep;
  rep.design = cfg.design;
  Json cj = experiment_config_to_json(cfg);
  rep.config_hash = hex64(fnv1a(cj.dump()));
  rep.report["format"] = "report/1";
  rep.report["design"] = cfg.design;
  rep.report["config"] = cj;
  rep.report["config_hash"] = rep.config_hash;
  rep.report["summary"] = std::move(summary);
  rep.csv.reserve(csv.size() + 1);
  rep.csv.push_back(kCsvHeader);
  rep.csv.insert(rep.csv.end(), csv.begin(), csv.end());
  return rep;
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<EpisodeOutcome> run_episodes(
    const std::vector<TaskSpec>& tasks,
    const std::function<EpisodeOutcome(const TaskSpec&)>& runner, int threads) {
  std::vector<EpisodeOutcome> out(tasks.size());
  parallel_for(tasks.size(), threads,
               [&](size_t i) { out[i] = runner(tasks[i]); });
  return out;
}

TrainedHmn train_hmn_arm(const std::vector<TaskSpec>& train, uint64_t seed,
                         int threads) {
  TrainedHmn out;
  std::vector<planner::PlannerPair> pairs;
  for (const TaskSpec& t : train)
    if (!is_question(t.kind)) pairs.push_back({t.instruction, t.gold});
  if (!pairs.empty()) {
    learn::TrainConfig pc;
    pc.seed = seed;
    out.planner = planner::train_planner(pairs, pc);
  }

  std::vector<learn::InducedLabels> per(train.size());
  parallel_for(train.size(), threads, [&](size_t i) {
    const TaskSpec& t = train[i];
    SceneState scene = scene_for(t);
    auto map = std::make_shared<PresearchMap>(build_presearch_map(scene));
    interp::CanonicalForm canon =
        interp::canonicalize(merged_program(), t.gold, scene, map);
    if (canon.outcome != interp::Outcome::success)
      throw std::runtime_error("train_hmn_arm: gold rollout failed for " + t.id);
    per[i] = learn::induce_reactor_labels(canon.atomics, scene, map);
  });
  learn::InducedLabels all;
  for (learn::InducedLabels& l : per) all.append(std::move(l));
  learn::TrainConfig rc;
  rc.seed = mix_seed(seed, 1);
  out.reactors =
      std::make_shared<learn::ReactorModels>(learn::train_reactor_models(all, rc));
  return out;
}

std::vector<baseline::ReactiveEpisode> reactive_corpus(
    const std::vector<TaskSpec>& tasks, const interp::NoiseSpec& noise,
    int threads) {
  std::vector<baseline::ReactiveEpisode> out(tasks.size());
  parallel_for(tasks.size(), threads, [&](size_t i) {
    const TaskSpec& t = tasks[i];
    SceneState scene = scene_for(t);
    auto map = std::make_shared<PresearchMap>(build_presearch_map(scene));
    bool question = is_question(t.kind);
    interp::CanonicalForm canon =
        interp::canonicalize(merged_program(), t.gold, scene, map);
    if (canon.outcome != interp::Outcome::success)
      throw std::runtime_error("reactive_corpus: gold rollout failed for " + t.id);
    std::vector<AtomicAction> atoms =
        question ? baseline::iqa_skeleton(canon.atomics) : canon.atomics;
    interp::NoiseSpec ns = noise;
    ns.seed = mix_seed(noise.seed, t.scene_seed);
    baseline::ReactiveEpisode e;
    e.instruction = t.instruction;
    e.candidates = baseline::ordered_candidates(scene, *map,
                                                /*include_movables=*/!question);
    e.gold = baseline::annotate_gold(
        atoms, scene, map, ns,
        question ? answer_token_for(t.kind, t.answer) : "");
    out[i] = std::move(e);
  });
  return out;
}

baseline::ReactiveModel train_reactive_arm(const std::vector<TaskSpec>& train,
                                           const interp::NoiseSpec& noise,
                                           uint64_t seed, int threads) {
  std::vector<baseline::ReactiveEpisode> corpus =
      reactive_corpus(train, noise, threads);
  learn::TrainConfig cfg;
  cfg.seed = seed;
  return baseline::train_reactive(corpus, cfg);
}

Json experiment_config_to_json(const ExperimentConfig& c) {
  Json j;
  j["format"] = "config/1";
  j["design"] = c.design;
  j["seed"] = c.seed;
  j["seeds"] = c.seeds;
  j["threads"] = c.threads;
  j["hh_train_per_kind"] = c.hh_train_per_kind;
  j["hh_eval_per_kind"] = c.hh_eval_per_kind;
  j["iqa_train_per_type"] = c.iqa_train_per_type;
  j["iqa_eval_per_type"] = c.iqa_eval_per_type;
  j["epsilon"] = c.epsilon;
  j["fractions"] = c.fractions;
  j["few_shot_n"] = c.few_shot_n;
  j["few_shot_cap"] = c.few_shot_cap;
  j["few_shot_splits"] = c.few_shot_splits;
  j["ab_tasks"] = c.ab_tasks;
  j["bootstrap"] = c.bootstrap;
  j["epsilons"] = c.epsilons;
  j["sweep_train_per_type"] = c.sweep_train_per_type;
  j["sweep_eval_per_type"] = c.sweep_eval_per_type;
  return j;
}

ExperimentConfig experiment_config_from_json(const Json& j) {
  if (j.value("format", std::string()) != "config/1")
    throw std::invalid_argument("experiment config: not a config/1 record");
  ExperimentConfig c;
  c.design = j.value("design", c.design);
  c.seed = j.value("seed", c.seed);
  c.seeds = j.value("seeds", c.seeds);
  c.threads = j.value("threads", c.threads);
  c.hh_train_per_kind = j.value("hh_train_per_kind", c.hh_train_per_kind);
  c.hh_eval_per_kind = j.value("hh_eval_per_kind", c.hh_eval_per_kind);
  c.iqa_train_per_type = j.value("iqa_train_per_type", c.iqa_train_per_type);
  c.iqa_eval_per_type = j.value("iqa_eval_per_type", c.iqa_eval_per_type);
  c.epsilon = j.value("epsilon", c.epsilon);
  c.fractions = j.value("fractions", c.fractions);
  c.few_shot_n = j.value("few_shot_n", c.few_shot_n);
  c.few_shot_cap = j.value("few_shot_cap", c.few_shot_cap);
  c.few_shot_splits = j.value("few_shot_splits", c.few_shot_splits);
  c.ab_tasks = j.value("ab_tasks", c.ab_tasks);
  c.bootstrap = j.value("bootstrap", c.bootstrap);
  c.epsilons = j.value("epsilons", c.epsilons);
  c.sweep_train_per_type = j.value("sweep_train_per_type", c.sweep_train_per_type);
  c.sweep_eval_per_type = j.value("sweep_eval_per_type", c.sweep_eval_per_type);
  return c;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  std::vector<std::string> csv;
  Json summary;
  if (cfg.design == "head_to_head") {
    summary = head_to_head(cfg, &csv);
  } else if (cfg.design == "data_efficiency") {
    summary = data_efficiency(cfg, &csv);
  } else if (cfg.design == "few_shot") {
    summary = few_shot(cfg, &csv);
  } else if (cfg.design == "library_ab") {
    summary = library_ab(cfg, &csv);
  } else if (cfg.design == "perception_sweep") {
    summary = perception_sweep(cfg, &csv);
  } else if (cfg.design == "length_buckets") {
    summary = length_buckets(cfg, &csv);
  } else {
    throw std::invalid_argument("unknown experiment design: " + cfg.design);
  }
  return finish_report(cfg, std::move(summary), std::move(csv));
}

}  // namespace pap::bench
