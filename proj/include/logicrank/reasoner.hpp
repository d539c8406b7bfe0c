#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "logicrank/lang.hpp"
#include "logicrank/scene.hpp"

namespace logicrank {

/// Unconstrained clause weight parameters; the weight of clause c is
/// logistic(params[c]).
struct ClauseWeights {
  Eigen::VectorXd params;

  /// One parameter per clause, taken from the parsed clauses.
  static ClauseWeights from_program(const RuleProgram& program);
  /// Every clause gets `param`; +infinity gives weights of exactly 1.
  static ClauseWeights uniform(std::size_t clause_count, double param);

  std::size_t size() const { return static_cast<std::size_t>(params.size()); }
  double weight(std::size_t clause) const;
};

enum class AtomKind {
  kInput,    // valued from the scene (entries of the GroundAtomTable)
  kAbsent,   // scene-valued predicate over an object the scene lacks; fixed at 0
  kDerived,  // head of some rule; computed by inference
};

struct GroundLiteral {
  std::size_t atom;
  bool negated = false;
};

/// One clause instantiated under an injective object binding.
struct GroundClause {
  std::size_t clause_index = 0;
  Binding binding;
  std::size_t head = 0;
  std::vector<GroundLiteral> body;
};

/// The ground atoms and clauses of a program over one scene.
///
/// Atom indices [0, table_size) coincide with the GroundAtomTable the
/// program was grounded against; absent and derived atoms follow. Ground
/// clauses are ordered by clause index, then lexicographically by binding.
struct GroundProgram {
  std::vector<Atom> atoms;
  std::vector<std::string> texts;
  std::vector<AtomKind> kinds;
  /// Stratum of each derived atom; -1 for input and absent atoms.
  std::vector<int> strata;
  std::vector<GroundClause> clauses;
  std::size_t table_size = 0;
  std::size_t clause_count = 0;  // clauses in the source program
  std::size_t query_atom = 0;
  int stratum_count = 0;

  std::size_t atom_count() const { return atoms.size(); }
  std::optional<std::size_t> find(std::string_view atom_text) const;

  /// Table values for input atoms, zero elsewhere.
  Eigen::VectorXd initial_valuation(const GroundAtomTable& table) const;
};

inline constexpr std::size_t kMaxGroundClauses = 1'000'000;

/// Instantiates every clause under all injective assignments of its
/// variables to scene objects. Throws EvaluationError if more than
/// `max_ground_clauses` instances would be produced.
GroundProgram ground(const RuleProgram& program, const SceneRecord& scene,
                     const GroundAtomTable& table,
                     std::size_t max_ground_clauses = kMaxGroundClauses);

struct InferOptions {
  int max_iters = 100;
  double tol = 1e-9;
  /// Called after every synchronous update with the current valuation.
  std::function<void(int iteration, const Eigen::VectorXd& valuation)> on_iteration;
};

struct InferenceResult {
  Eigen::VectorXd valuation;
  double query_prob = 0.0;
  double normalized_prob = 0.0;
  std::size_t n_atoms = 0;
  std::optional<GroundClause> best_grounding;
  std::vector<std::pair<std::string, double>> per_atom;
  int iterations = 0;

  /// Ground clause that last raised each derived atom (-1 if never raised).
  std::vector<std::ptrdiff_t> support;
  /// Update step at which each atom reached its final value (-1 for atoms
  /// that never changed).
  std::vector<int> settled_at;
};

/// Weighted forward chaining to a fixpoint, stratum by stratum.
///
/// Per derived atom h: v[h] = max(v[h], max_c w_c * prod(body values)),
/// where negated literals contribute (1 - v). Throws EvaluationError if a
/// stratum does not settle within max_iters or a negated literal reads a
/// non-lower stratum.
InferenceResult infer(const GroundAtomTable& table, const GroundProgram& program,
                      const ClauseWeights& weights, const InferOptions& options = {});

/// Predict step: query_prob^(1/n) for n >= 1, unchanged for n == 0.
double normalize(double query_prob, std::size_t n_atoms);

struct Gradients {
  /// d query_prob / d params[c] for every source clause.
  Eigen::VectorXd d_params;
  /// d query_prob / d value for every GroundAtomTable entry.
  Eigen::VectorXd d_facts;
  /// True if some atom on the derivation path has competing derivations
  /// within 1e-9; the result is then one subgradient.
  bool subgradient_only = false;
  /// Smallest margin between the winning derivation and its runner-up over
  /// the derivation path (+inf if no atom has competitors).
  double min_gap = 0.0;
};

/// Exact derivatives of query_prob along the winning derivation.
Gradients gradients(const GroundAtomTable& table, const GroundProgram& program,
                    const ClauseWeights& weights, const InferOptions& options = {});

/// build_atom_table -> ground -> infer.
InferenceResult evaluate_scene(const RuleProgram& program, const SceneRecord& scene,
                               const ValuationConfig& cfg, const ClauseWeights& weights,
                               const InferOptions& options = {});

}  // namespace logicrank
