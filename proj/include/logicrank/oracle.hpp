#pragma once

#include <map>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include <Eigen/Core>

#include "logicrank/lang.hpp"
#include "logicrank/predicates.hpp"
#include "logicrank/reasoner.hpp"
#include "logicrank/scene.hpp"

namespace logicrank {

struct GroundTruthScene;

namespace oracle {

/// Classical (boolean) view of a scene: one label per attribute and a
/// relation table over ordered pairs of distinct objects.
struct CrispScene {
  struct Object {
    std::string id;
    std::map<Attribute, std::string> labels;
  };

  std::vector<Object> objects;
  /// (a, b, relation) triples that hold.
  std::set<std::tuple<std::string, std::string, Relation>> relations;
};

/// Thresholds detections: a label is kept if its probability exceeds
/// `threshold`; relations use strict center comparison.
CrispScene crisp_from_detections(const SceneRecord& scene, double threshold = 0.5);

CrispScene crisp_from_truth(const GroundTruthScene& truth);

/// True iff the query is entailed under stratified Datalog semantics,
/// by naive bottom-up evaluation over all injective bindings.
bool crisp_eval(const CrispScene& scene, const RuleProgram& program);

/// Top-down memoized evaluation of the fuzzy semantics over an acyclic
/// ground program: every atom's value. Throws EvaluationError on a cycle.
Eigen::VectorXd recursive_fuzzy_valuation(const GroundAtomTable& table,
                                          const GroundProgram& program,
                                          const ClauseWeights& weights);

double recursive_fuzzy_eval(const GroundAtomTable& table, const GroundProgram& program,
                            const ClauseWeights& weights);

/// P(count >= k) by summing over all 2^E outcomes. E must be at most 20.
double enumerate_count(std::span<const double> probs, int k);

}  // namespace oracle
}  // namespace logicrank
