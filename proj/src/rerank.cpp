#include "logicrank/rerank.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <ostream>
#include <thread>

#include "logicrank/errors.hpp"

namespace logicrank {

namespace {

RankedResult score_scene(const SceneRecord& scene, const RuleProgram& program,
                         const ValuationConfig& cfg, const ClauseWeights& weights) {
  RankedResult r;
  r.image_id = scene.image_id;
  r.external_scores = scene.external_scores;
  try {
    InferenceResult res = evaluate_scene(program, scene, cfg, weights);
    r.normalized_prob = res.normalized_prob;
    r.query_prob = res.query_prob;
    r.n_atoms = res.n_atoms;
    r.per_atom = std::move(res.per_atom);
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  return r;
}

std::string short_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

}  // namespace

std::vector<RankedResult> rank_pool(const ScenePool& pool, const RuleProgram& program,
                                    const ValuationConfig& cfg, const ClauseWeights& weights,
                                    const RankOptions& options) {
  if (pool.empty()) throw DataError("candidate pool is empty");

  const std::size_t n = pool.scenes.size();
  std::vector<RankedResult> results(n);
  const unsigned workers = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(n)));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) results[i] = score_scene(pool.scenes[i], program, cfg, weights);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> threads;
    for (unsigned t = 0; t < workers; ++t) {
      threads.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          results[i] = score_scene(pool.scenes[i], program, cfg, weights);
        }
      });
    }
    for (auto& t : threads) t.join();
  }
  for (const auto& rejected : pool.rejected) {
    RankedResult r;
    r.image_id = rejected.image_id;
    r.error = rejected.reason;
    results.push_back(std::move(r));
  }

  std::sort(results.begin(), results.end(), [](const RankedResult& a, const RankedResult& b) {
    if (a.normalized_prob != b.normalized_prob) return a.normalized_prob > b.normalized_prob;
    return a.image_id < b.image_id;
  });
  for (std::size_t i = 0; i < results.size(); ++i) results[i].rank = static_cast<int>(i + 1);
  if (options.top_k && *options.top_k < results.size()) results.resize(*options.top_k);
  return results;
}

std::string format_report(const InferenceResult& result, const RuleProgram& program) {
  if (!result.best_grounding) return "no grounding; score 0\n";
  std::string out;
  for (const auto& [atom, prob] : result.per_atom) {
    out += atom + ": " + short_number(prob) + "\n";
  }
  out += "product: " + short_number(result.query_prob) + " (n = " +
         std::to_string(result.n_atoms) + ")\n";
  out += program.query + ": " + short_number(result.normalized_prob) + "\n";
  return out;
}

std::string explain(const SceneRecord& scene, const RuleProgram& program,
                    const ValuationConfig& cfg, const ClauseWeights& weights) {
  return format_report(evaluate_scene(program, scene, cfg, weights), program);
}

nlohmann::ordered_json to_json(const RankedResult& r) {
  nlohmann::ordered_json j;
  j["image_id"] = r.image_id;
  j["rank"] = r.rank;
  j["score"] = r.normalized_prob;
  j["raw_score"] = r.query_prob;
  j["n"] = r.n_atoms;
  auto atoms = nlohmann::ordered_json::array();
  for (const auto& [atom, prob] : r.per_atom) atoms.push_back({{"atom", atom}, {"prob", prob}});
  j["atoms"] = std::move(atoms);
  auto scores = nlohmann::ordered_json::object();
  for (const auto& [name, v] : r.external_scores) scores[name] = v;
  j["external_scores"] = std::move(scores);
  if (r.error) j["error"] = *r.error;
  return j;
}

void write_ranked(std::ostream& out, const std::vector<RankedResult>& results) {
  for (const auto& r : results) out << to_json(r).dump() << '\n';
}

}  // namespace logicrank
