#include <algorithm>
#include <charconv>
#include <cmath>
#include <unordered_map>

#include "logicrank/errors.hpp"
#include "logicrank/numeric.hpp"
#include "logicrank/predicates.hpp"
#include "logicrank/reasoner.hpp"

namespace logicrank {

ClauseWeights ClauseWeights::from_program(const RuleProgram& program) {
  ClauseWeights w;
  w.params.resize(static_cast<Eigen::Index>(program.clauses.size()));
  for (std::size_t c = 0; c < program.clauses.size(); ++c) {
    w.params(static_cast<Eigen::Index>(c)) = program.clauses[c].weight_param;
  }
  return w;
}

ClauseWeights ClauseWeights::uniform(std::size_t clause_count, double param) {
  return {Eigen::VectorXd::Constant(static_cast<Eigen::Index>(clause_count), param)};
}

double ClauseWeights::weight(std::size_t clause) const {
  return logistic(params(static_cast<Eigen::Index>(clause)));
}

std::optional<std::size_t> GroundProgram::find(std::string_view atom_text) const {
  for (std::size_t i = 0; i < texts.size(); ++i) {
    if (texts[i] == atom_text) return i;
  }
  return std::nullopt;
}

Eigen::VectorXd GroundProgram::initial_valuation(const GroundAtomTable& table) const {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(atoms.size()));
  v.head(static_cast<Eigen::Index>(table_size)) = table.values();
  return v;
}

namespace {

// Number of injective assignments of k variables to n objects, saturating
// at `cap + 1`.
std::size_t falling_factorial(std::size_t n, std::size_t k, std::size_t cap) {
  if (k > n) return 0;
  std::size_t total = 1;
  for (std::size_t i = 0; i < k; ++i) {
    total *= n - i;
    if (total > cap) return cap + 1;
  }
  return total;
}

class Grounder {
 public:
  Grounder(const RuleProgram& program, const GroundAtomTable& table, GroundProgram& out)
      : program_(program), out_(out) {
    out_.table_size = table.size();
    out_.clause_count = program.clauses.size();
    out_.stratum_count = program.stratum_count();
    for (std::size_t i = 0; i < table.size(); ++i) {
      add_atom(table.atoms()[i], table.texts()[i], AtomKind::kInput, -1);
    }
  }

  std::size_t resolve(const Atom& atom, const Binding& binding) {
    Atom ground{atom.predicate, {}};
    ground.args.reserve(atom.args.size());
    for (const auto& t : atom.args) {
      ground.args.push_back(Term::constant(t.is_variable() ? *lookup(binding, t.name) : t.name));
    }
    if (ground.predicate == kAtLeastPredicate) {
      // Counts are keyed by their numeric value, e.g. `007` and `7` coincide.
      long k = 0;
      const std::string& s = ground.args[2].name;
      std::from_chars(s.data(), s.data() + s.size(), k);
      ground.args[2].name = std::to_string(k);
    }
    std::string text = format_atom(ground);
    if (auto it = index_.find(text); it != index_.end()) return it->second;
    if (is_builtin(ground.predicate)) {
      return add_atom(std::move(ground), std::move(text), AtomKind::kAbsent, -1);
    }
    const int stratum = program_.strata.at(ground.predicate);
    return add_atom(std::move(ground), std::move(text), AtomKind::kDerived, stratum);
  }

  void ground_clause(std::size_t clause_index, const std::vector<std::string>& object_ids) {
    const Clause& clause = program_.clauses[clause_index];
    const std::vector<std::string> vars = clause.variables();
    Binding binding;
    std::vector<bool> used(object_ids.size(), false);
    enumerate(clause_index, clause, vars, object_ids, used, binding);
  }

 private:
  void enumerate(std::size_t clause_index, const Clause& clause,
                 const std::vector<std::string>& vars, const std::vector<std::string>& ids,
                 std::vector<bool>& used, Binding& binding) {
    if (binding.size() == vars.size()) {
      GroundClause gc;
      gc.clause_index = clause_index;
      gc.binding = binding;
      gc.head = resolve(clause.head, binding);
      gc.body.reserve(clause.body.size());
      for (const auto& lit : clause.body) {
        gc.body.push_back({resolve(lit.atom, binding), lit.negated});
      }
      out_.clauses.push_back(std::move(gc));
      return;
    }
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (used[i]) continue;
      used[i] = true;
      binding.emplace_back(vars[binding.size()], ids[i]);
      enumerate(clause_index, clause, vars, ids, used, binding);
      binding.pop_back();
      used[i] = false;
    }
  }

  std::size_t add_atom(Atom atom, std::string text, AtomKind kind, int stratum) {
    const std::size_t i = out_.atoms.size();
    index_.emplace(text, i);
    out_.atoms.push_back(std::move(atom));
    out_.texts.push_back(std::move(text));
    out_.kinds.push_back(kind);
    out_.strata.push_back(stratum);
    return i;
  }

  const RuleProgram& program_;
  GroundProgram& out_;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace

GroundProgram ground(const RuleProgram& program, const SceneRecord& scene,
                     const GroundAtomTable& table, std::size_t max_ground_clauses) {
  std::vector<std::string> ids;
  ids.reserve(scene.objects.size());
  for (const auto& obj : scene.objects) ids.push_back(obj.id);
  std::sort(ids.begin(), ids.end());

  std::size_t total = 0;
  for (const auto& clause : program.clauses) {
    total += falling_factorial(ids.size(), clause.variables().size(), max_ground_clauses);
    if (total > max_ground_clauses) {
      throw EvaluationError("grounding scene '" + scene.image_id + "' would exceed " +
                            std::to_string(max_ground_clauses) + " ground clauses");
    }
  }

  GroundProgram out;
  Grounder grounder(program, table, out);
  out.clauses.reserve(total);
  for (std::size_t c = 0; c < program.clauses.size(); ++c) grounder.ground_clause(c, ids);
  out.query_atom = grounder.resolve(Atom{program.query, {}}, {});
  return out;
}

}  // namespace logicrank
