// logicrank: rank candidate scenes against a rule query, explain a single
// scene, and generate synthetic pools and counting benchmarks.
//
// Exit codes: 0 success, 2 rule parse/validation error, 3 data/schema error,
// 4 internal evaluation error.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "logicrank/errors.hpp"
#include "logicrank/lang.hpp"
#include "logicrank/oracle.hpp"
#include "logicrank/reasoner.hpp"
#include "logicrank/rerank.hpp"
#include "logicrank/scene_gen.hpp"
#include "logicrank/scene_io.hpp"

namespace {

using namespace logicrank;

constexpr int kExitRule = 2;
constexpr int kExitData = 3;
constexpr int kExitEval = 4;

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw RuleError(RuleError::Kind::kSyntax, {}, "cannot open rule file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RuleProgram load_rules(const std::string& path, const std::string& query) {
  return parse_program(read_text(path), query);
}

ClauseWeights load_weights(const std::string& path, const RuleProgram& program) {
  if (path.empty()) return ClauseWeights::from_program(program);
  std::ifstream in(path);
  if (!in) throw DataError("cannot open weights file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path + ": " + e.what());
  }
  if (j.is_object() && j.contains("theta")) j = j["theta"];
  if (!j.is_array() || j.size() != program.clauses.size()) {
    throw DataError(path + ": expected an array of " + std::to_string(program.clauses.size()) +
                    " clause weight parameters");
  }
  ClauseWeights w = ClauseWeights::uniform(program.clauses.size(), 0.0);
  for (std::size_t c = 0; c < j.size(); ++c) {
    if (!j[c].is_number() || std::isnan(j[c].get<double>())) {
      throw DataError(path + ": weight parameter " + std::to_string(c) + " is not a number");
    }
    w.params(static_cast<Eigen::Index>(c)) = j[c].get<double>();
  }
  return w;
}

std::pair<int, int> parse_range(const std::string& text, const std::string& what) {
  const auto dots = text.find("..");
  try {
    if (dots == std::string::npos) {
      const int v = std::stoi(text);
      return {v, v};
    }
    return {std::stoi(text.substr(0, dots)), std::stoi(text.substr(dots + 2))};
  } catch (const std::exception&) {
    throw DataError(what + " must look like MIN..MAX, got '" + text + "'");
  }
}

template <typename Fn>
void with_output(const std::string& path, Fn&& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  write(out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"logicrank: probabilistic-logic reranking of object-centric scenes"};
  app.require_subcommand(1);

  std::string rules_path, query, pool_path, out_path, weights_path, scene_path, truth_path;
  std::optional<std::size_t> top_k;
  double tau = 0.05;
  bool with_explain = false;
  unsigned threads = 1;

  auto* rank = app.add_subcommand("rank", "Rank a JSONL pool of scenes against a query");
  rank->add_option("--rules", rules_path, "Rule file")->required();
  rank->add_option("--query", query, "Query predicate")->required();
  rank->add_option("--detections", pool_path, "Candidate pool (JSONL)")->required();
  rank->add_option("--top", top_k, "Emit only the K best candidates");
  rank->add_option("--out", out_path, "Output ranked.jsonl (default: stdout)");
  rank->add_flag("--explain", with_explain, "Print a per-atom report for each emitted candidate to stderr");
  rank->add_option("--tau", tau, "Spatial relation slope")->check(CLI::PositiveNumber);
  rank->add_option("--weights", weights_path, "JSON array of clause weight parameters");
  rank->add_option("--threads", threads, "Evaluation threads")->check(CLI::Range(1u, 256u));

  auto* explain_cmd = app.add_subcommand("explain", "Explain the score of a single scene");
  explain_cmd->add_option("--rules", rules_path, "Rule file")->required();
  explain_cmd->add_option("--query", query, "Query predicate")->required();
  explain_cmd->add_option("--scene", scene_path, "Scene (JSON)")->required();
  explain_cmd->add_option("--tau", tau, "Spatial relation slope")->check(CLI::PositiveNumber);
  explain_cmd->add_option("--weights", weights_path, "JSON array of clause weight parameters");

  int n_scenes = 0;
  std::string objects_range = "1..6";
  double noise = 0.0;
  double temperature = 0.1;
  std::uint64_t seed = 0;
  auto* gen = app.add_subcommand("gen-scenes", "Generate a synthetic CLEVR-style pool");
  gen->add_option("--n", n_scenes, "Number of scenes")->required()->check(CLI::PositiveNumber);
  gen->add_option("--objects", objects_range, "Object count range MIN..MAX");
  gen->add_option("--noise", noise, "Attribute noise scale")->check(CLI::NonNegativeNumber);
  gen->add_option("--temperature", temperature, "Softmax temperature")->check(CLI::PositiveNumber);
  gen->add_option("--seed", seed, "Random seed");
  gen->add_option("--out", out_path, "Output pool (JSONL)")->required();
  gen->add_option("--truth", truth_path, "Output ground truth (JSONL)");

  std::string groups = "1..4";
  int per_group = 50;
  std::string class_name = "dog";
  auto* bench = app.add_subcommand("bench-count", "Counting-separation benchmark (CSV)");
  bench->add_option("--groups", groups, "Group range A..B");
  bench->add_option("--per-group", per_group, "Scenes per group")->check(CLI::PositiveNumber);
  bench->add_option("--class", class_name, "Counted class");
  bench->add_option("--noise", noise, "Attribute noise scale")->check(CLI::NonNegativeNumber);
  bench->add_option("--seed", seed, "Random seed");
  bench->add_option("--out", out_path, "Output CSV (default: stdout)");

  auto* oracle_cmd = app.add_subcommand("oracle", "Crisp entailment of a thresholded scene");
  oracle_cmd->group("");
  oracle_cmd->add_option("--rules", rules_path)->required();
  oracle_cmd->add_option("--query", query)->required();
  oracle_cmd->add_option("--scene", scene_path)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    ValuationConfig cfg;
    cfg.spatial_slope = tau;

    if (*rank) {
      const RuleProgram program = load_rules(rules_path, query);
      const ClauseWeights weights = load_weights(weights_path, program);
      const ScenePool pool = read_pool_file(pool_path);
      RankOptions options;
      options.top_k = top_k;
      options.threads = threads;
      const auto ranked = rank_pool(pool, program, cfg, weights, options);
      with_output(out_path, [&](std::ostream& out) { write_ranked(out, ranked); });
      if (with_explain) {
        for (const auto& r : ranked) {
          std::cerr << "== " << r.image_id << " (rank " << r.rank << ")\n";
          const auto it = std::find_if(pool.scenes.begin(), pool.scenes.end(),
                                       [&](const SceneRecord& s) { return s.image_id == r.image_id; });
          if (r.error || it == pool.scenes.end()) {
            std::cerr << "error: " << r.error.value_or("unknown") << "\n";
          } else {
            std::cerr << explain(*it, program, cfg, weights);
          }
        }
      }
    } else if (*explain_cmd) {
      const RuleProgram program = load_rules(rules_path, query);
      const ClauseWeights weights = load_weights(weights_path, program);
      const SceneRecord scene = read_scene_file(scene_path);
      std::cout << explain(scene, program, cfg, weights);
    } else if (*gen) {
      SceneSpec spec;
      std::tie(spec.min_objects, spec.max_objects) = parse_range(objects_range, "--objects");
      spec.noise = noise;
      spec.temperature = temperature;
      spec.seed = seed;
      const GeneratedPool pool = generate_pool(spec, n_scenes);
      with_output(out_path, [&](std::ostream& out) { write_pool(out, pool.scenes); });
      if (!truth_path.empty()) {
        with_output(truth_path, [&](std::ostream& out) { write_truth(out, pool.truths); });
      }
    } else if (*bench) {
      BenchCountSpec spec;
      std::tie(spec.first_group, spec.last_group) = parse_range(groups, "--groups");
      spec.per_group = per_group;
      spec.class_name = class_name;
      spec.scenes.noise = noise;
      spec.scenes.seed = seed;
      spec.scenes.id_prefix = "count";
      if (std::find(spec.scenes.class_vocab.begin(), spec.scenes.class_vocab.end(), class_name) ==
          spec.scenes.class_vocab.end()) {
        spec.scenes.class_vocab.push_back(class_name);
      }
      const auto rows = bench_count(spec);
      with_output(out_path, [&](std::ostream& out) { write_bench_csv(out, rows); });
    } else if (*oracle_cmd) {
      const RuleProgram program = load_rules(rules_path, query);
      const SceneRecord scene = read_scene_file(scene_path);
      std::cout << (oracle::crisp_eval(oracle::crisp_from_detections(scene), program) ? "true"
                                                                                       : "false")
                << "\n";
    }
  } catch (const RuleError& e) {
    std::cerr << "rule error: " << rules_path << ":" << e.what() << "\n";
    return kExitRule;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "evaluation error: " << e.what() << "\n";
    return kExitEval;
  }
  return 0;
}
