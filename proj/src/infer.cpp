#include <algorithm>
#include <cmath>
#include <sstream>

#include "logicrank/errors.hpp"
#include "logicrank/reasoner.hpp"

namespace logicrank {

namespace {

double literal_value(const Eigen::VectorXd& v, const GroundLiteral& lit) {
  const double x = v(static_cast<Eigen::Index>(lit.atom));
  return lit.negated ? 1.0 - x : x;
}

double clause_value(const Eigen::VectorXd& v, const GroundClause& gc, double weight) {
  double value = weight;
  for (const auto& lit : gc.body) value *= literal_value(v, lit);
  return value;
}

void check_weights(const GroundProgram& program, const ClauseWeights& weights) {
  if (weights.size() != program.clause_count) {
    std::ostringstream msg;
    msg << "expected " << program.clause_count << " clause weights, got " << weights.size();
    throw EvaluationError(msg.str());
  }
}

}  // namespace

double normalize(double query_prob, std::size_t n_atoms) {
  if (n_atoms == 0) return query_prob;
  return std::pow(query_prob, 1.0 / static_cast<double>(n_atoms));
}

InferenceResult infer(const GroundAtomTable& table, const GroundProgram& program,
                      const ClauseWeights& weights, const InferOptions& options) {
  check_weights(program, weights);
  if (!(options.tol > 0.0)) throw EvaluationError("inference tolerance must be positive");

  const std::size_t atom_count = program.atom_count();
  InferenceResult result;
  result.valuation = program.initial_valuation(table);
  result.support.assign(atom_count, -1);
  result.settled_at.assign(atom_count, -1);
  Eigen::VectorXd& v = result.valuation;

  std::vector<double> w(program.clause_count);
  for (std::size_t c = 0; c < program.clause_count; ++c) w[c] = weights.weight(c);

  std::vector<std::vector<std::size_t>> by_stratum(static_cast<std::size_t>(program.stratum_count));
  for (std::size_t g = 0; g < program.clauses.size(); ++g) {
    const GroundClause& gc = program.clauses[g];
    const int s = program.strata[gc.head];
    for (const auto& lit : gc.body) {
      if (lit.negated && program.kinds[lit.atom] == AtomKind::kDerived &&
          program.strata[lit.atom] >= s) {
        throw EvaluationError("negated literal " + program.texts[lit.atom] +
                              " is not in a lower stratum than " + program.texts[gc.head]);
      }
    }
    by_stratum[static_cast<std::size_t>(s)].push_back(g);
  }

  int step = 0;
  Eigen::VectorXd next;
  for (const auto& clauses : by_stratum) {
    int iters = 0;
    while (true) {
      if (iters == options.max_iters) {
        // One more synchronous pass measures the residual that remains.
        double residual = 0.0;
        for (std::size_t g : clauses) {
          const GroundClause& gc = program.clauses[g];
          const double gain = clause_value(v, gc, w[gc.clause_index]) -
                              v(static_cast<Eigen::Index>(gc.head));
          residual = std::max(residual, gain);
        }
        std::ostringstream msg;
        msg << "inference did not converge within " << options.max_iters
            << " iterations (residual " << residual << ")";
        throw EvaluationError(msg.str());
      }
      ++iters;
      ++step;
      next = v;
      for (std::size_t g : clauses) {
        const GroundClause& gc = program.clauses[g];
        const double value = clause_value(v, gc, w[gc.clause_index]);
        const auto h = static_cast<Eigen::Index>(gc.head);
        if (value > next(h)) {
          next(h) = value;
          result.support[gc.head] = static_cast<std::ptrdiff_t>(g);
        }
      }
      double change = 0.0;
      for (std::size_t g : clauses) {
        const auto h = static_cast<Eigen::Index>(program.clauses[g].head);
        if (next(h) != v(h)) {
          change = std::max(change, next(h) - v(h));
          result.settled_at[program.clauses[g].head] = step;
        }
      }
      v.swap(next);
      if (options.on_iteration) options.on_iteration(step, v);
      if (change < options.tol) break;
    }
    result.iterations += iters;
  }

  // Winning grounding for the query: first (lowest clause index, then
  // binding) among the ground clauses attaining the maximum.
  const std::size_t q = program.query_atom;
  result.query_prob = v(static_cast<Eigen::Index>(q));
  double best = -1.0;
  for (const auto& gc : program.clauses) {
    if (gc.head != q) continue;
    const double value = clause_value(v, gc, w[gc.clause_index]);
    if (value > best) {
      best = value;
      result.best_grounding = gc;
    }
  }
  if (result.best_grounding) {
    const GroundClause& gc = *result.best_grounding;
    result.n_atoms = gc.body.size();
    for (const auto& lit : gc.body) {
      result.per_atom.emplace_back((lit.negated ? "not " : "") + program.texts[lit.atom],
                                   literal_value(v, lit));
    }
  }
  result.normalized_prob = normalize(result.query_prob, result.n_atoms);
  return result;
}

InferenceResult evaluate_scene(const RuleProgram& program, const SceneRecord& scene,
                               const ValuationConfig& cfg, const ClauseWeights& weights,
                               const InferOptions& options) {
  const GroundAtomTable table = build_atom_table(scene, program, cfg);
  const GroundProgram grounded = ground(program, scene, table);
  return infer(table, grounded, weights, options);
}

}  // namespace logicrank
