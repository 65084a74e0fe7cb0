#include "pap/planner.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "pap/world.hpp"

namespace pap::planner {

using interp::CallEntry;
using interp::ExecutableProcedure;
using interp::Value;
using learn::Features;

namespace {
constexpr const char* kStop = "<stop>";
}

std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> out;
  std::string word;
  auto flush = [&] {
    if (!word.empty()) out.push_back(word);
    word.clear();
  };
  for (char ch : text) {
    unsigned char c = static_cast<unsigned char>(ch);
    if (std::isalnum(c) || ch == '_') {
      word.push_back(static_cast<char>(std::tolower(c)));
    } else if (std::isspace(c)) {
      flush();
    } else {
      flush();
      out.push_back(std::string(1, ch));
    }
  }
  flush();
  return out;
}

Instruction make_instruction(const std::string& text, const std::string& template_id) {
  return {text, tokenize(text), template_id};
}

std::string plural_of(const std::string& cls) {
  if (cls == "knife") return "knives";
  if (cls.empty()) return cls;
  char last = cls.back();
  if (last == 'o' || last == 's' || last == 'x') return cls + "es";
  if (cls.size() >= 2) {
    std::string tail = cls.substr(cls.size() - 2);
    if (tail == "ch" || tail == "sh") return cls + "es";
  }
  return cls + "s";
}

std::string singular_of(const std::string& word) {
  if (known_class(word)) return word;
  if (word == "knives") return "knife";
  if (word.size() > 2 && word.compare(word.size() - 2, 2, "es") == 0) {
    std::string base = word.substr(0, word.size() - 2);
    if (known_class(base)) return base;
  }
  if (word.size() > 1 && word.back() == 's') {
    std::string base = word.substr(0, word.size() - 1);
    if (known_class(base)) return base;
  }
  return word;
}

namespace {

bool recep_class_name(const std::string& w) {
  return known_class(w) && class_info(w).is_receptacle;
}

ExecutableProcedure one_call(const std::string& proc,
                             std::vector<std::string> args) {
  CallEntry c{proc, {}, false};
  for (std::string& a : args) c.args.push_back(Value::of(std::move(a)));
  return {std::move(c)};
}

// First "a|an <class>" in the tokens; falls back to the first bare known
// class word.
std::string find_object(const std::vector<std::string>& t) {
  for (size_t i = 0; i + 1 < t.size(); ++i)
    if ((t[i] == "a" || t[i] == "an") && known_class(singular_of(t[i + 1])))
      return singular_of(t[i + 1]);
  for (const std::string& w : t) {
    std::string s = singular_of(w);
    if (known_class(s) && !recep_class_name(s)) return s;
  }
  return "";
}

}  // namespace

ExecutableProcedure rule_plan(const Instruction& q) {
  const std::vector<std::string>& t = q.tokens;
  auto unmatched = [&]() -> ExecutableProcedure {
    throw std::invalid_argument("question matches no template: " + q.text);
  };
  if (t.empty()) return unmatched();

  // Counting questions.
  if (t.size() >= 3 && t[0] == "how" && t[1] == "many") {
    std::string obj = singular_of(t[2]);
    if (!known_class(obj)) return unmatched();
    return one_call("udp_count_obj", {obj});
  }
  if (t.size() >= 6 && t[0] == "what" && t[1] == "is" && t[2] == "the" &&
      t[3] == "number" && t[4] == "of") {
    std::string obj = singular_of(t[5]);
    if (!known_class(obj)) return unmatched();
    return one_call("udp_count_obj", {obj});
  }
  if (t.size() >= 3 && t[0] == "count" && t[1] == "the") {
    std::string obj = singular_of(t[2]);
    if (!known_class(obj)) return unmatched();
    return one_call("udp_count_obj", {obj});
  }

  // Containment: "... in the <receptacle>" or "does the <receptacle>
  // contain ...".
  if (t.size() >= 5 && t[0] == "does" && t[1] == "the" && recep_class_name(t[2]) &&
      t[3] == "contain") {
    std::string obj = find_object(t);
    if (obj.empty()) return unmatched();
    return one_call("udp_check_contain", {obj, t[2]});
  }
  for (size_t i = 0; i + 2 < t.size(); ++i) {
    if (t[i] == "in" && t[i + 1] == "the" && recep_class_name(t[i + 2])) {
      std::string obj = find_object(std::vector<std::string>(t.begin(), t.begin() + i));
      if (obj.empty()) return unmatched();
      return one_call("udp_check_contain", {obj, t[i + 2]});
    }
  }

  // Existence: "is there ...", "can you find ...", "does this room have ...".
  bool existence_lead =
      (t.size() >= 2 && t[0] == "is" && t[1] == "there") ||
      (t.size() >= 3 && t[0] == "can" && t[1] == "you" && t[2] == "find") ||
      (t.size() >= 4 && t[0] == "does" && t[1] == "this" && t[2] == "room");
  if (existence_lead) {
    std::string obj = find_object(t);
    if (!obj.empty()) return one_call("udp_check_obj_exist", {obj});
  }
  return unmatched();
}

std::vector<std::string> induce_planner_labels(
    const std::vector<std::string>& subgoals) {
  std::vector<std::string> verbs;
  for (const std::string& s : subgoals) {
    if (s == "Goto") continue;
    if (s == "Pickup" || s == "Pick") {
      verbs.push_back("Pick");
    } else if (s == "Put" || s == "Clean" || s == "Heat" || s == "Cool" ||
               s == "Slice" || s == "Toggle") {
      verbs.push_back(s);
    } else {
      throw std::invalid_argument("unknown subgoal: " + s);
    }
  }
  std::sort(verbs.begin(), verbs.end());
  std::string key;
  for (const std::string& v : verbs) key += (key.empty() ? "" : "+") + v;

  static const std::map<std::string, std::vector<std::string>> table = {
      {"Pick+Put", {"udp_pick_and_put_object"}},
      {"Pick+Pick+Put+Put", {"udp_pick_and_put_object", "udp_pick_and_put_object"}},
      {"Clean+Pick+Put", {"udp_clean_object", "udp_put_object"}},
      {"Heat+Pick+Put", {"udp_heat_object", "udp_pick_and_put_object"}},
      {"Cool+Pick+Put", {"udp_cool_object", "udp_pick_and_put_object"}},
      {"Pick+Put+Slice", {"udp_slice_object", "udp_pick_and_put_object"}},
      {"Heat+Pick+Put+Slice",
       {"udp_slice_object", "udp_heat_object", "udp_pick_and_put_object"}},
      {"Cool+Pick+Put+Slice",
       {"udp_slice_object", "udp_cool_object", "udp_pick_and_put_object"}},
      {"Pick+Toggle", {"udp_pick_object", "navigate", "toggle_on"}},
  };
  auto it = table.find(key);
  if (it == table.end())
    throw std::invalid_argument("unmapped subgoal sequence: " +
                                (key.empty() ? "(empty)" : key));
  return it->second;
}

namespace {

void add_ngrams(const Instruction& q, const std::string& prefix, Features* f) {
  for (size_t i = 0; i < q.tokens.size(); ++i) {
    (*f)[prefix + "w:" + q.tokens[i]] = 1.0;
    if (i + 1 < q.tokens.size())
      (*f)[prefix + "b:" + q.tokens[i] + "|" + q.tokens[i + 1]] = 1.0;
  }
}

Features step_features(const Instruction& q, const std::vector<std::string>& prefix,
                       size_t t) {
  Features f;
  add_ngrams(q, "", &f);
  f["t:" + std::to_string(std::min<size_t>(t, 5))] = 1.0;
  f["prev:" + (prefix.empty() ? std::string("^") : prefix.back())] = 1.0;
  f["prev2:" + (prefix.size() < 2 ? std::string("^") : prefix[prefix.size() - 2])] = 1.0;
  return f;
}

Features arg_features(const Instruction& q, const std::string& fn, size_t slot) {
  Features f;
  add_ngrams(q, "s" + std::to_string(slot) + ":", &f);
  f["fn:" + fn] = 1.0;
  f["fnslot:" + fn + "/" + std::to_string(slot)] = 1.0;
  return f;
}

}  // namespace

PlannerModel train_planner(const std::vector<PlannerPair>& pairs,
                           const learn::TrainConfig& cfg) {
  if (pairs.empty()) throw std::invalid_argument("train_planner: empty corpus");
  PlannerModel m;
  std::vector<learn::Example> fn_data, arg_data;
  size_t longest = 0;
  for (const auto& [q, gold] : pairs) {
    longest = std::max(longest, gold.size());
    std::vector<std::string> prefix;
    for (const CallEntry& call : gold) {
      fn_data.push_back({step_features(q, prefix, prefix.size()), call.name});
      auto it = m.arity.find(call.name);
      if (it == m.arity.end()) {
        m.arity[call.name] = static_cast<int>(call.args.size());
        m.atomic_fn[call.name] = call.atomic;
      } else if (it->second != static_cast<int>(call.args.size())) {
        throw std::invalid_argument("train_planner: inconsistent arity for " +
                                    call.name);
      }
      for (size_t slot = 0; slot < call.args.size(); ++slot) {
        if (!call.args[slot].is_str())
          throw std::invalid_argument(
              "train_planner: gold argument outside the token vocabulary: " +
              call.args[slot].show());
        arg_data.push_back(
            {arg_features(q, call.name, slot), call.args[slot].as_str()});
      }
      prefix.push_back(call.name);
    }
    fn_data.push_back({step_features(q, prefix, prefix.size()), kStop});
  }
  m.fn_head = learn::LinearModel::train(fn_data, cfg);
  if (!arg_data.empty()) m.arg_head = learn::LinearModel::train(arg_data, cfg);
  m.max_len = static_cast<int>(std::max<size_t>(4, longest + 2));
  return m;
}

ExecutableProcedure plan(const PlannerModel& m, const Instruction& q) {
  ExecutableProcedure out;
  std::vector<std::string> prefix;
  for (int t = 0; t < m.max_len; ++t) {
    std::string fn = m.fn_head.predict(step_features(q, prefix, prefix.size()));
    if (fn == kStop) break;
    CallEntry call{fn, {}, m.atomic_fn.at(fn)};
    int n = m.arity.at(fn);
    for (int slot = 0; slot < n; ++slot)
      call.args.push_back(
          Value::of(m.arg_head.predict(arg_features(q, fn, slot))));
    out.push_back(std::move(call));
    prefix.push_back(fn);
  }
  return out;
}

Json PlannerModel::to_json() const {
  return Json{{"format", "planner/1"},
              {"fn", fn_head.to_json()},
              {"arg", arg_head.classes().empty() ? Json() : arg_head.to_json()},
              {"arity", arity},
              {"atomic", atomic_fn},
              {"max_len", max_len}};
}

PlannerModel PlannerModel::from_json(const Json& j) {
  if (j.at("format") != "planner/1")
    throw std::invalid_argument("PlannerModel: unknown format");
  PlannerModel m;
  m.fn_head = learn::LinearModel::from_json(j.at("fn"));
  if (!j.at("arg").is_null())
    m.arg_head = learn::LinearModel::from_json(j.at("arg"));
  m.arity = j.at("arity").get<std::map<std::string, int>>();
  m.atomic_fn = j.at("atomic").get<std::map<std::string, bool>>();
  m.max_len = j.at("max_len").get<int>();
  return m;
}

Json pair_to_json(const PlannerPair& p) {
  return Json{{"text", p.first.text},
              {"template", p.first.template_id},
              {"a_e", interp::ae_to_json(p.second)}};
}

PlannerPair pair_from_json(const Json& j) {
  Instruction q = make_instruction(j.at("text").get<std::string>(),
                                   j.value("template", ""));
  return {std::move(q), interp::ae_from_json(j.at("a_e"))};
}

}  // namespace pap::planner
