#include "logicrank/oracle.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <stdexcept>

#include "logicrank/errors.hpp"
#include "logicrank/scene_gen.hpp"

namespace logicrank::oracle {

namespace {

void add_relations(CrispScene& crisp, const std::string& a_id, const BoundingBox& a,
                   const std::string& b_id, const BoundingBox& b) {
  if (a.cy < b.cy) crisp.relations.emplace(a_id, b_id, Relation::kAbove);
  if (a.cy > b.cy) crisp.relations.emplace(a_id, b_id, Relation::kBelow);
  if (a.cx > b.cx) crisp.relations.emplace(a_id, b_id, Relation::kRight);
  if (a.cx < b.cx) crisp.relations.emplace(a_id, b_id, Relation::kLeft);
}

constexpr Attribute kAttributes[] = {Attribute::kShape, Attribute::kColor, Attribute::kSize,
                                     Attribute::kClass};

}  // namespace

CrispScene crisp_from_detections(const SceneRecord& scene, double threshold) {
  CrispScene crisp;
  for (const auto& obj : scene.objects) {
    CrispScene::Object o{obj.id, {}};
    for (Attribute a : kAttributes) {
      for (const auto& [name, p] : obj.distribution(a)) {
        if (p > threshold) o.labels[a] = name;
      }
    }
    crisp.objects.push_back(std::move(o));
  }
  for (const auto& a : scene.objects) {
    for (const auto& b : scene.objects) {
      if (&a != &b) add_relations(crisp, a.id, a.bbox, b.id, b.bbox);
    }
  }
  return crisp;
}

CrispScene crisp_from_truth(const GroundTruthScene& truth) {
  CrispScene crisp;
  for (const auto& obj : truth.objects) {
    CrispScene::Object o{obj.id, {}};
    for (Attribute a : kAttributes) o.labels[a] = obj.label(a);
    crisp.objects.push_back(std::move(o));
  }
  crisp.relations = truth.relations;
  return crisp;
}

// --- crisp evaluation ------------------------------------------------------------

namespace {

class CrispEvaluator {
 public:
  CrispEvaluator(const CrispScene& scene, const RuleProgram& program)
      : scene_(scene), program_(program) {}

  bool run() {
    const std::map<std::string, int> strata = stratify();
    int top = 0;
    for (const auto& [_, s] : strata) top = std::max(top, s);
    for (int s = 0; s <= top; ++s) {
      bool changed = true;
      while (changed) {
        changed = false;
        for (const auto& clause : program_.clauses) {
          if (strata.at(clause.head.predicate) != s) continue;
          const std::vector<std::string> vars = clause.variables();
          std::map<std::string, std::string> binding;
          std::vector<std::string> derived_now;
          for_each_binding(vars, 0, binding, [&] {
            if (!body_holds(clause, binding)) return;
            derived_now.push_back(ground_text(clause.head, binding));
          });
          for (auto& fact : derived_now) {
            if (facts_.insert(std::move(fact)).second) changed = true;
          }
        }
      }
    }
    return facts_.count(program_.query) > 0;
  }

 private:
  // Stratum numbers by relaxation: head >= positive body, head > negated body.
  std::map<std::string, int> stratify() const {
    std::map<std::string, int> strata;
    for (const auto& c : program_.clauses) strata[c.head.predicate] = 0;
    const int limit = static_cast<int>(strata.size()) + 1;
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& c : program_.clauses) {
        for (const auto& lit : c.body) {
          auto it = strata.find(lit.atom.predicate);
          if (it == strata.end()) continue;
          const int need = it->second + (lit.negated ? 1 : 0);
          int& head = strata[c.head.predicate];
          if (head < need) {
            head = need;
            changed = true;
            if (head > limit) throw std::logic_error("program is not stratified");
          }
        }
      }
    }
    return strata;
  }

  void for_each_binding(const std::vector<std::string>& vars, std::size_t next,
                        std::map<std::string, std::string>& binding,
                        const std::function<void()>& visit) const {
    if (next == vars.size()) {
      visit();
      return;
    }
    for (const auto& obj : scene_.objects) {
      const bool taken = std::any_of(binding.begin(), binding.end(),
                                     [&](const auto& kv) { return kv.second == obj.id; });
      if (taken) continue;
      binding[vars[next]] = obj.id;
      for_each_binding(vars, next + 1, binding, visit);
      binding.erase(vars[next]);
    }
  }

  static std::string arg(const Term& t, const std::map<std::string, std::string>& binding) {
    return t.is_variable() ? binding.at(t.name) : t.name;
  }

  static std::string ground_text(const Atom& atom, const std::map<std::string, std::string>& binding) {
    std::string s = atom.predicate;
    if (atom.args.empty()) return s;
    s += '(';
    for (std::size_t i = 0; i < atom.args.size(); ++i) {
      if (i) s += ", ";
      s += arg(atom.args[i], binding);
    }
    return s + ')';
  }

  const CrispScene::Object* object(const std::string& id) const {
    for (const auto& o : scene_.objects) {
      if (o.id == id) return &o;
    }
    return nullptr;
  }

  bool atom_holds(const Atom& atom, const std::map<std::string, std::string>& binding) const {
    if (auto attr = attribute_from_name(atom.predicate)) {
      const auto* o = object(arg(atom.args[0], binding));
      if (!o) return false;
      auto it = o->labels.find(*attr);
      return it != o->labels.end() && it->second == atom.args[1].name;
    }
    if (atom.predicate == kPositionPredicate) {
      const std::string a = arg(atom.args[0], binding);
      const std::string b = arg(atom.args[1], binding);
      return scene_.relations.count({a, b, *relation_from_name(atom.args[2].name)}) > 0;
    }
    if (atom.predicate == kAtLeastPredicate) {
      const Attribute attr = *attribute_from_name(atom.args[0].name);
      const std::string& value = atom.args[1].name;
      long k = 0;
      std::from_chars(atom.args[2].name.data(), atom.args[2].name.data() + atom.args[2].name.size(), k);
      long count = 0;
      for (const auto& o : scene_.objects) {
        auto it = o.labels.find(attr);
        if (it != o.labels.end() && it->second == value) ++count;
      }
      return count >= k;
    }
    return facts_.count(ground_text(atom, binding)) > 0;
  }

  bool body_holds(const Clause& clause, const std::map<std::string, std::string>& binding) const {
    for (const auto& lit : clause.body) {
      if (atom_holds(lit.atom, binding) == lit.negated) return false;
    }
    return true;
  }

  const CrispScene& scene_;
  const RuleProgram& program_;
  std::set<std::string> facts_;
};

}  // namespace

bool crisp_eval(const CrispScene& scene, const RuleProgram& program) {
  return CrispEvaluator(scene, program).run();
}

// --- recursive fuzzy evaluation ------------------------------------------------------

Eigen::VectorXd recursive_fuzzy_valuation(const GroundAtomTable& table,
                                          const GroundProgram& program,
                                          const ClauseWeights& weights) {
  const std::size_t n = program.atom_count();
  std::vector<std::vector<const GroundClause*>> by_head(n);
  for (const auto& gc : program.clauses) by_head[gc.head].push_back(&gc);

  enum class State { kUnvisited, kActive, kDone };
  std::vector<State> state(n, State::kUnvisited);
  Eigen::VectorXd value = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));

  std::function<double(std::size_t)> eval = [&](std::size_t a) -> double {
    const auto i = static_cast<Eigen::Index>(a);
    if (state[a] == State::kDone) return value(i);
    if (state[a] == State::kActive) {
      throw EvaluationError("cycle through " + program.texts[a]);
    }
    state[a] = State::kActive;
    double v = 0.0;
    switch (program.kinds[a]) {
      case AtomKind::kInput: v = table.values()(i); break;
      case AtomKind::kAbsent: v = 0.0; break;
      case AtomKind::kDerived:
        for (const GroundClause* gc : by_head[a]) {
          double prod = weights.weight(gc->clause_index);
          for (const auto& lit : gc->body) {
            const double x = eval(lit.atom);
            prod *= lit.negated ? 1.0 - x : x;
          }
          v = std::max(v, prod);
        }
        break;
    }
    value(i) = v;
    state[a] = State::kDone;
    return v;
  };

  for (std::size_t a = 0; a < n; ++a) eval(a);
  return value;
}

double recursive_fuzzy_eval(const GroundAtomTable& table, const GroundProgram& program,
                            const ClauseWeights& weights) {
  return recursive_fuzzy_valuation(table, program, weights)(
      static_cast<Eigen::Index>(program.query_atom));
}

double enumerate_count(std::span<const double> probs, int k) {
  if (probs.size() > 20) throw std::invalid_argument("enumerate_count supports at most 20 trials");
  const std::size_t e = probs.size();
  double tail = 0.0;
  for (std::uint32_t outcome = 0; outcome < (1u << e); ++outcome) {
    double p = 1.0;
    int hits = 0;
    for (std::size_t j = 0; j < e; ++j) {
      if (outcome & (1u << j)) {
        p *= probs[j];
        ++hits;
      } else {
        p *= 1.0 - probs[j];
      }
    }
    if (hits >= k) tail += p;
  }
  return tail;
}

}  // namespace logicrank::oracle
