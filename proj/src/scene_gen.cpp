#include "logicrank/scene_gen.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <random>

#include <json.hpp>

#include "logicrank/errors.hpp"
#include "logicrank/reasoner.hpp"

namespace logicrank {

void SceneSpec::validate() const {
  if (shape_vocab.empty() || color_vocab.empty() || size_vocab.empty() || class_vocab.empty()) {
    throw DataError("scene vocabularies must be non-empty");
  }
  if (min_objects < 0 || max_objects < min_objects ||
      max_objects > static_cast<int>(kDefaultMaxObjects)) {
    throw DataError("object count range must satisfy 0 <= min <= max <= " +
                    std::to_string(kDefaultMaxObjects));
  }
  if (!(noise >= 0.0)) throw DataError("noise must be >= 0");
  if (!(temperature > 0.0)) throw DataError("temperature must be > 0");
}

const std::string& GroundTruthScene::Object::label(Attribute attribute) const {
  switch (attribute) {
    case Attribute::kShape: return shape;
    case Attribute::kColor: return color;
    case Attribute::kSize: return size;
    case Attribute::kClass: return klass;
  }
  return shape;
}

namespace {

class SceneSampler {
 public:
  explicit SceneSampler(const SceneSpec& spec) : spec_(spec), rng_(spec.seed) {}

  /// `classes` fixes the class label of the first objects; the remaining
  /// objects draw theirs from `free_classes`.
  GroundTruthScene sample_truth(std::string image_id, int object_count,
                                const std::vector<std::string>& classes,
                                const std::vector<std::string>& free_classes) {
    GroundTruthScene truth;
    truth.image_id = std::move(image_id);
    const int n = object_count;

    std::vector<int> x_slot(n), y_slot(n);
    std::iota(x_slot.begin(), x_slot.end(), 0);
    std::iota(y_slot.begin(), y_slot.end(), 0);
    std::shuffle(x_slot.begin(), x_slot.end(), rng_);
    std::shuffle(y_slot.begin(), y_slot.end(), rng_);

    // Distinct slots on both axes keep every pair of centers apart by at
    // least 0.9 * spacing horizontally and vertically.
    const double spacing = n > 1 ? 0.8 / (n - 1) : 0.8;
    const double base_extent = std::min(0.2, 0.8 * spacing);
    std::uniform_real_distribution<double> jitter(-0.05 * spacing, 0.05 * spacing);
    std::uniform_real_distribution<double> free_pos(0.2, 0.8);
    auto slot_center = [&](int slot) {
      return n > 1 ? 0.1 + spacing * slot + jitter(rng_) : free_pos(rng_);
    };

    for (int e = 0; e < n; ++e) {
      GroundTruthScene::Object obj;
      obj.id = "obj" + std::to_string(e + 1);
      obj.shape = pick(spec_.shape_vocab);
      obj.color = pick(spec_.color_vocab);
      obj.size = pick(spec_.size_vocab);
      obj.klass = e < static_cast<int>(classes.size()) ? classes[static_cast<std::size_t>(e)]
                                                       : pick(free_classes);
      const double extent = obj.size == "small" ? 0.6 * base_extent : base_extent;
      obj.bbox = {slot_center(x_slot[static_cast<std::size_t>(e)]),
                  slot_center(y_slot[static_cast<std::size_t>(e)]), extent, extent};
      truth.objects.push_back(std::move(obj));
    }

    for (const auto& a : truth.objects) {
      for (const auto& b : truth.objects) {
        if (&a == &b) continue;
        if (a.bbox.cy < b.bbox.cy) truth.relations.emplace(a.id, b.id, Relation::kAbove);
        if (a.bbox.cy > b.bbox.cy) truth.relations.emplace(a.id, b.id, Relation::kBelow);
        if (a.bbox.cx > b.bbox.cx) truth.relations.emplace(a.id, b.id, Relation::kRight);
        if (a.bbox.cx < b.bbox.cx) truth.relations.emplace(a.id, b.id, Relation::kLeft);
      }
    }
    return truth;
  }

  /// Noisy detections of a ground-truth scene. Consumes the same number of
  /// random draws whatever the noise level, so pools generated with equal
  /// seeds differ only in noise magnitude.
  SceneRecord observe(const GroundTruthScene& truth) {
    SceneRecord scene;
    scene.image_id = truth.image_id;
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (const auto& t : truth.objects) {
      DetectedObject obj;
      obj.id = t.id;
      obj.shape = perturb(spec_.shape_vocab, t.shape, gauss);
      obj.color = perturb(spec_.color_vocab, t.color, gauss);
      obj.size = perturb(spec_.size_vocab, t.size, gauss);
      obj.klass = perturb(spec_.class_vocab, t.klass, gauss);
      const double dx = gauss(rng_) * spec_.noise / 4.0;
      const double dy = gauss(rng_) * spec_.noise / 4.0;
      obj.bbox = t.bbox;
      obj.bbox.cx = std::clamp(t.bbox.cx + dx, 0.0, 1.0);
      obj.bbox.cy = std::clamp(t.bbox.cy + dy, 0.0, 1.0);
      scene.objects.push_back(std::move(obj));
    }
    return scene;
  }

  int sample_count(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

 private:
  const std::string& pick(const std::vector<std::string>& vocab) {
    return vocab[std::uniform_int_distribution<std::size_t>(0, vocab.size() - 1)(rng_)];
  }

  Distribution perturb(const std::vector<std::string>& vocab, const std::string& label,
                       std::normal_distribution<double>& gauss) {
    std::vector<double> logits(vocab.size());
    for (std::size_t j = 0; j < vocab.size(); ++j) {
      const double onehot = vocab[j] == label ? 1.0 : 0.0;
      logits[j] = (onehot + spec_.noise * gauss(rng_)) / spec_.temperature;
    }
    Distribution dist;
    if (spec_.noise == 0.0) {
      for (const auto& v : vocab) dist[v] = v == label ? 1.0 : 0.0;
      return dist;
    }
    const double top = *std::max_element(logits.begin(), logits.end());
    double total = 0.0;
    for (double& l : logits) {
      l = std::exp(l - top);
      total += l;
    }
    for (std::size_t j = 0; j < vocab.size(); ++j) dist[vocab[j]] = logits[j] / total;
    return dist;
  }

  const SceneSpec& spec_;
  std::mt19937_64 rng_;
};

std::string padded(int index) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%05d", index);
  return buf;
}

void replace_all(std::string& s, std::string_view from, const std::string& to) {
  for (std::size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) {
    s.replace(pos, from.size(), to);
  }
}

}  // namespace

GeneratedPool generate_pool(const SceneSpec& spec, int count) {
  spec.validate();
  if (count < 1) throw DataError("scene count must be >= 1");
  SceneSampler sampler(spec);
  GeneratedPool pool;
  pool.scenes.reserve(static_cast<std::size_t>(count));
  pool.truths.reserve(static_cast<std::size_t>(count));
  for (int i = 1; i <= count; ++i) {
    const int n = sampler.sample_count(spec.min_objects, spec.max_objects);
    GroundTruthScene truth =
        sampler.sample_truth(spec.id_prefix + "_" + padded(i), n, {}, spec.class_vocab);
    pool.scenes.push_back(sampler.observe(truth));
    pool.truths.push_back(std::move(truth));
  }
  return pool;
}

void write_truth(std::ostream& out, const std::vector<GroundTruthScene>& truths) {
  for (const auto& truth : truths) {
    nlohmann::ordered_json j;
    j["image_id"] = truth.image_id;
    auto objects = nlohmann::ordered_json::array();
    for (const auto& o : truth.objects) {
      objects.push_back({{"id", o.id},
                         {"bbox", {o.bbox.cx, o.bbox.cy, o.bbox.w, o.bbox.h}},
                         {"shape", o.shape},
                         {"color", o.color},
                         {"size", o.size},
                         {"class", o.klass}});
    }
    j["objects"] = std::move(objects);
    out << j.dump() << '\n';
  }
}

std::string counting_rule(const BenchCountSpec& spec, int i) {
  std::string rule = spec.rule_template;
  replace_all(rule, "{class}", spec.class_name);
  replace_all(rule, "{i}", std::to_string(i));
  replace_all(rule, "{next}", std::to_string(i + 1));
  return rule;
}

std::vector<BenchRow> bench_count(const BenchCountSpec& spec) {
  spec.scenes.validate();
  const int cap = static_cast<int>(kDefaultMaxObjects);
  if (spec.first_group < 0 || spec.last_group < spec.first_group || spec.last_group > cap) {
    throw DataError("groups must lie within 0.." + std::to_string(cap));
  }
  if (spec.per_group < 1) throw DataError("per-group count must be >= 1");

  std::vector<std::string> others;
  for (const auto& c : spec.scenes.class_vocab) {
    if (c != spec.class_name) others.push_back(c);
  }

  std::vector<RuleProgram> rules;
  for (int j = spec.first_group; j <= spec.last_group; ++j) {
    rules.push_back(parse_program(counting_rule(spec, j), "kp_" + std::to_string(j)));
  }

  SceneSampler sampler(spec.scenes);
  const ValuationConfig cfg;
  std::vector<BenchRow> rows;
  for (int i = spec.first_group; i <= spec.last_group; ++i) {
    const std::vector<std::string> members(static_cast<std::size_t>(i), spec.class_name);
    const int max_extra = others.empty() ? 0 : std::min(spec.max_distractors, cap - i);
    for (int s = 1; s <= spec.per_group; ++s) {
      const int extra = sampler.sample_count(0, std::max(max_extra, 0));
      const std::string id = spec.scenes.id_prefix + "_g" + std::to_string(i) + "_" + padded(s);
      const GroundTruthScene truth = sampler.sample_truth(id, i + extra, members, others);
      const SceneRecord scene = sampler.observe(truth);
      for (std::size_t r = 0; r < rules.size(); ++r) {
        const InferenceResult res =
            evaluate_scene(rules[r], scene, cfg, ClauseWeights::from_program(rules[r]));
        rows.push_back({i, spec.first_group + static_cast<int>(r), id, res.normalized_prob});
      }
    }
  }
  return rows;
}

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << "group,rule,image_id,prob\n";
  for (const auto& r : rows) {
    out << r.group << ',' << r.rule << ',' << r.image_id << ',' << format_double(r.prob) << '\n';
  }
}

}  // namespace logicrank
