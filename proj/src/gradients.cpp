#include <algorithm>
#include <limits>

#include "logicrank/reasoner.hpp"

namespace logicrank {

Gradients gradients(const GroundAtomTable& table, const GroundProgram& program,
                    const ClauseWeights& weights, const InferOptions& options) {
  const InferenceResult inferred = infer(table, program, weights, options);
  const Eigen::VectorXd& v = inferred.valuation;
  const std::size_t atom_count = program.atom_count();

  std::vector<std::vector<std::size_t>> derivations(atom_count);
  for (std::size_t g = 0; g < program.clauses.size(); ++g) {
    derivations[program.clauses[g].head].push_back(g);
  }

  auto literal_value = [&](const GroundLiteral& lit) {
    const double x = v(static_cast<Eigen::Index>(lit.atom));
    return lit.negated ? 1.0 - x : x;
  };

  Gradients out;
  out.d_params = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(program.clause_count));
  out.d_facts = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(program.table_size));
  out.min_gap = std::numeric_limits<double>::infinity();

  Eigen::VectorXd adjoint = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(atom_count));
  std::vector<bool> on_path(atom_count, false);
  adjoint(static_cast<Eigen::Index>(program.query_atom)) = 1.0;
  on_path[program.query_atom] = true;

  // A supporting clause only reads atoms that settled at earlier steps, so
  // visiting derived atoms by decreasing settle step is a reverse
  // topological order of the derivation.
  std::vector<std::size_t> order;
  for (std::size_t a = 0; a < atom_count; ++a) {
    if (program.kinds[a] == AtomKind::kDerived) order.push_back(a);
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return inferred.settled_at[x] > inferred.settled_at[y];
  });

  for (std::size_t h : order) {
    if (!on_path[h]) continue;
    const std::ptrdiff_t support = inferred.support[h];

    // Competitors: every other derivation of h, plus the initial value 0
    // that the max-join keeps.
    if (!derivations[h].empty()) {
      double runner_up = 0.0;
      for (std::size_t g : derivations[h]) {
        if (static_cast<std::ptrdiff_t>(g) == support) continue;
        const auto& gc = program.clauses[g];
        double val = weights.weight(gc.clause_index);
        for (const auto& lit : gc.body) val *= literal_value(lit);
        runner_up = std::max(runner_up, val);
      }
      out.min_gap = std::min(out.min_gap, v(static_cast<Eigen::Index>(h)) - runner_up);
    }
    if (support < 0) continue;

    const GroundClause& gc = program.clauses[static_cast<std::size_t>(support)];
    const double a = adjoint(static_cast<Eigen::Index>(h));
    const double w = weights.weight(gc.clause_index);
    const std::size_t n = gc.body.size();

    // prefix[i] * suffix[i + 1] is the product of every factor but i; no
    // division, so zero factors are handled.
    std::vector<double> factors(n), prefix(n + 1, 1.0), suffix(n + 1, 1.0);
    for (std::size_t i = 0; i < n; ++i) factors[i] = literal_value(gc.body[i]);
    for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] * factors[i];
    for (std::size_t i = n; i > 0; --i) suffix[i - 1] = suffix[i] * factors[i - 1];

    out.d_params(static_cast<Eigen::Index>(gc.clause_index)) += a * prefix[n] * w * (1.0 - w);
    for (std::size_t i = 0; i < n; ++i) {
      const GroundLiteral& lit = gc.body[i];
      const double partial = w * prefix[i] * suffix[i + 1];
      adjoint(static_cast<Eigen::Index>(lit.atom)) += a * (lit.negated ? -partial : partial);
      on_path[lit.atom] = true;
    }
  }

  out.d_facts = adjoint.head(static_cast<Eigen::Index>(program.table_size));
  out.subgradient_only = out.min_gap <= 1e-9;
  return out;
}

}  // namespace logicrank
