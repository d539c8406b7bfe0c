#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "logicrank/lang.hpp"
#include "logicrank/reasoner.hpp"
#include "logicrank/scene.hpp"

namespace logicrank {

struct RankedResult {
  std::string image_id;
  int rank = 0;  // 1-based
  double normalized_prob = 0.0;
  double query_prob = 0.0;
  std::size_t n_atoms = 0;
  std::vector<std::pair<std::string, double>> per_atom;
  std::map<std::string, double> external_scores;
  /// Set when the candidate could not be evaluated; it then scores 0.
  std::optional<std::string> error;
};

struct RankOptions {
  /// Truncates the returned list; every candidate is still evaluated.
  std::optional<std::size_t> top_k;
  /// Worker threads for per-scene evaluation; output does not depend on it.
  unsigned threads = 1;
};

/// Scores every candidate against the query and orders them by normalized
/// score (descending), ties by image_id (ascending). Candidates that fail
/// to load or evaluate are kept with score 0 and an error note. Throws
/// DataError for an empty pool.
std::vector<RankedResult> rank_pool(const ScenePool& pool, const RuleProgram& program,
                                    const ValuationConfig& cfg, const ClauseWeights& weights,
                                    const RankOptions& options = {});

/// Human-readable feedback for one scene: the winning grounding's literals
/// with their probabilities, the raw product, n and the normalized score.
std::string explain(const SceneRecord& scene, const RuleProgram& program,
                    const ValuationConfig& cfg, const ClauseWeights& weights);

std::string format_report(const InferenceResult& result, const RuleProgram& program);

/// One `ranked.jsonl` record: image_id, rank, score, raw_score, n, atoms,
/// external_scores (and error, for failed candidates).
nlohmann::ordered_json to_json(const RankedResult& result);

void write_ranked(std::ostream& out, const std::vector<RankedResult>& results);

}  // namespace logicrank
