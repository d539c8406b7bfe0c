#pragma once

#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "logicrank/predicates.hpp"
#include "logicrank/scene.hpp"

namespace logicrank {

/// Sampling parameters for synthetic CLEVR-style scenes.
struct SceneSpec {
  int min_objects = 1;
  int max_objects = 6;
  std::vector<std::string> shape_vocab{"cube", "sphere", "cylinder"};
  std::vector<std::string> color_vocab{"gray", "red", "blue", "green",
                                       "brown", "purple", "cyan", "yellow"};
  std::vector<std::string> size_vocab{"small", "large"};
  std::vector<std::string> class_vocab{"dog", "cat", "person", "car"};
  /// Scale of the Gaussian perturbation of attribute logits; box centers
  /// are perturbed with scale noise / 4.
  double noise = 0.0;
  /// Softmax temperature applied to the (one-hot + noise) logits.
  double temperature = 0.1;
  std::uint64_t seed = 0;
  std::string id_prefix = "scene";

  /// Throws DataError for empty vocabularies or an invalid object range.
  void validate() const;
};

/// Oracle labels for one generated scene.
struct GroundTruthScene {
  struct Object {
    std::string id;
    BoundingBox bbox;
    std::string shape;
    std::string color;
    std::string size;
    std::string klass;

    const std::string& label(Attribute attribute) const;
  };

  std::string image_id;
  std::vector<Object> objects;
  /// (a, b, relation) triples that hold, by strict center comparison.
  std::set<std::tuple<std::string, std::string, Relation>> relations;
};

struct GeneratedPool {
  std::vector<SceneRecord> scenes;
  std::vector<GroundTruthScene> truths;
};

/// Samples `count` scenes and their noisy detections. Deterministic in
/// (spec, count). With noise == 0 every emitted distribution is exactly
/// one-hot on the true label.
GeneratedPool generate_pool(const SceneSpec& spec, int count);

/// Serializes ground truth as JSONL (one scene per line).
void write_truth(std::ostream& out, const std::vector<GroundTruthScene>& truths);

/// Counting benchmark: groups of scenes that contain exactly i objects of a
/// class, scored by one counting rule per group.
struct BenchCountSpec {
  int first_group = 1;
  int last_group = 4;
  int per_group = 50;
  std::string class_name = "dog";
  /// Rule text with `{class}`, `{i}` and `{next}` placeholders; the query
  /// predicate is `kp_{i}`.
  std::string rule_template =
      "kp_{i} :- at_least(class, {class}, {i}), not at_least(class, {class}, {next}).";
  /// Extra objects of other classes added to each scene: uniform in
  /// [0, max_distractors].
  int max_distractors = 3;
  SceneSpec scenes;
};

struct BenchRow {
  int group = 0;
  int rule = 0;
  std::string image_id;
  double prob = 0.0;
};

/// Instantiated counting rule for group i.
std::string counting_rule(const BenchCountSpec& spec, int i);

/// Scores every (scene group, rule) pair. Rows are ordered by group, then
/// scene, then rule.
std::vector<BenchRow> bench_count(const BenchCountSpec& spec);

/// CSV with header `group,rule,image_id,prob`.
void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows);

/// Shortest round-trip decimal text of a double.
std::string format_double(double value);

}  // namespace logicrank
