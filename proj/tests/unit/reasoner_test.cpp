#include <chrono>
#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "logicrank/errors.hpp"
#include "logicrank/oracle.hpp"
#include "logicrank/reasoner.hpp"

namespace logicrank {
namespace {

using testing::make_object;

constexpr double kInf = std::numeric_limits<double>::infinity();

// Reference values for the worked example: 1 * 0.95 * 0.58 * 0.83 * 1 and
// its fifth root, evaluated independently.
constexpr double kExampleProduct = 0.45733;
constexpr double kExampleRoot = 0.855157163820202;

struct Evaluated {
  GroundAtomTable table;
  GroundProgram program;
  InferenceResult result;
};

Evaluated run(const RuleProgram& p, const SceneRecord& scene, const ClauseWeights& w,
              const InferOptions& options = {}) {
  Evaluated e;
  e.table = build_atom_table(scene, p, {});
  e.program = ground(p, scene, e.table);
  e.result = infer(e.table, e.program, w, options);
  return e;
}

Evaluated run(const RuleProgram& p, const SceneRecord& scene) {
  return run(p, scene, ClauseWeights::from_program(p));
}

SceneRecord crisp_sphere_on_cube_scene() {
  SceneRecord s{"crisp", {}, {}};
  s.objects.push_back(make_object("top", 0.5, 0.2, {{"sphere", 1.0}}, {{"blue", 1.0}}));
  s.objects.push_back(make_object("bottom", 0.5, 0.8, {{"cube", 1.0}}, {{"red", 1.0}}));
  s.objects.push_back(make_object("other", 0.1, 0.5, {{"cylinder", 1.0}}, {{"green", 1.0}}));
  return s;
}

TEST(ClauseWeights, LogisticMapping) {
  const ClauseWeights w{Eigen::Vector3d(kInf, 0.0, -kInf)};
  EXPECT_EQ(w.weight(0), 1.0);
  EXPECT_EQ(w.weight(1), 0.5);
  EXPECT_EQ(w.weight(2), 0.0);
  const RuleProgram p = parse_program(testing::kSizedSpheresRule, "kp");
  EXPECT_EQ(ClauseWeights::from_program(p).size(), 3u);
}

TEST(Ground, InjectiveBindingCounts) {
  const RuleProgram p = parse_program(testing::kSphereOnCubeRule, "kp");
  SceneRecord scene = testing::sphere_on_cube_scene();
  EXPECT_EQ(ground(p, scene, build_atom_table(scene, p, {})).clauses.size(), 2u);
  scene.objects.push_back(make_object("obj3", 0.1, 0.5, {}, {}));
  const GroundProgram g3 = ground(p, scene, build_atom_table(scene, p, {}));
  EXPECT_EQ(g3.clauses.size(), 6u);
  for (const auto& gc : g3.clauses) {
    ASSERT_EQ(gc.binding.size(), 2u);
    EXPECT_NE(gc.binding[0].second, gc.binding[1].second);
  }
  // Lexicographic binding order.
  EXPECT_EQ(g3.clauses[0].binding, (Binding{{"O1", "obj1"}, {"O2", "obj2"}}));
  EXPECT_EQ(g3.clauses[5].binding, (Binding{{"O1", "obj3"}, {"O2", "obj2"}}));

  const RuleProgram one = parse_program("kp :- shape(O,cube).", "kp");
  const SceneRecord empty{"e", {}, {}};
  EXPECT_EQ(ground(one, empty, build_atom_table(empty, one, {})).clauses.size(), 0u);
}

TEST(Ground, VariableFreeClausesGroundOnce) {
  const RuleProgram p = parse_program("kp :- at_least(class, dog, 1), not at_least(class, dog, 2).", "kp");
  for (const SceneRecord& s : {testing::sphere_on_cube_scene(), SceneRecord{"e", {}, {}}}) {
    EXPECT_EQ(ground(p, s, build_atom_table(s, p, {})).clauses.size(), 1u);
  }
}

TEST(Ground, BlowUpGuard) {
  const RuleProgram p = parse_program(testing::kSphereOnCubeRule, "kp");
  const SceneRecord s = testing::sphere_on_cube_scene();
  EXPECT_THROW(ground(p, s, build_atom_table(s, p, {}), 1), EvaluationError);
  EXPECT_NO_THROW(ground(p, s, build_atom_table(s, p, {}), 2));
}

TEST(Ground, AbsentAndDerivedAtoms) {
  const RuleProgram p = parse_program(testing::kSizedSpheresRule, "kp");
  const SceneRecord s = crisp_sphere_on_cube_scene();
  const Evaluated e = run(p, s);
  const auto bs = e.program.find("blue_sphere(top)");
  ASSERT_TRUE(bs);
  EXPECT_EQ(e.program.kinds[*bs], AtomKind::kDerived);
  EXPECT_EQ(e.program.strata[*bs], 0);
  EXPECT_EQ(e.program.kinds[e.program.query_atom], AtomKind::kDerived);
  for (std::size_t i = 0; i < e.program.table_size; ++i) {
    EXPECT_EQ(e.program.kinds[i], AtomKind::kInput);
  }
}

TEST(Infer, WorkedExample) {
  const RuleProgram p = parse_program(testing::kSphereOnCubeRule, "kp");
  const auto start = std::chrono::steady_clock::now();
  const InferenceResult r = evaluate_scene(p, testing::sphere_on_cube_scene(), {}, ClauseWeights::from_program(p));
  const auto elapsed = std::chrono::steady_clock::now() - start;
  EXPECT_NEAR(r.query_prob, kExampleProduct, 1e-4);
  EXPECT_NEAR(r.normalized_prob, kExampleRoot, 1e-4);
  EXPECT_NEAR(r.query_prob, 0.46, 0.005);
  EXPECT_NEAR(r.normalized_prob, 0.86, 0.005);
  EXPECT_EQ(r.n_atoms, 5u);
  ASSERT_TRUE(r.best_grounding);
  EXPECT_EQ(r.best_grounding->binding, (Binding{{"O1", "obj1"}, {"O2", "obj2"}}));
  ASSERT_EQ(r.per_atom.size(), 5u);
  EXPECT_EQ(r.per_atom[0], (std::pair<std::string, double>{"shape(obj1, sphere)", 1.0}));
  EXPECT_EQ(r.per_atom[3].first, "color(obj2, red)");
  EXPECT_LT(std::chrono::duration<double>(elapsed).count(), 1e-3);
}

TEST(Infer, ExactFactVector) {
  // Facts set directly in the table: the spatial atom is exactly 1 here.
  const RuleProgram p = parse_program(testing::kSphereOnCubeRule, "kp");
  const SceneRecord s = testing::sphere_on_cube_scene();
  GroundAtomTable table = build_atom_table(s, p, {});
  table.values()(static_cast<Eigen::Index>(*table.find("position(obj1, obj2, above)"))) = 1.0;
  const GroundProgram g = ground(p, s, table);
  const InferenceResult r = infer(table, g, ClauseWeights::from_program(p));
  EXPECT_NEAR(r.query_prob, kExampleProduct, 1e-12);
  EXPECT_NEAR(r.normalized_prob, kExampleRoot, 1e-12);
}

TEST(Infer, AllTrueFacts) {
  const RuleProgram p = parse_program(testing::kSphereOnCubeRule, "kp");
  const Evaluated e = run(p, crisp_sphere_on_cube_scene());
  EXPECT_NEAR(e.result.query_prob, 1.0, 1e-3);
  GroundAtomTable table = e.table;
  table.values().setOnes();
  const InferenceResult r = infer(table, e.program, ClauseWeights::from_program(p));
  EXPECT_EQ(r.query_prob, 1.0);
  EXPECT_EQ(r.normalized_prob, 1.0);
}

TEST(Infer, MaxOverDerivationsPicksItsBodyLength) {
  const RuleProgram p = parse_program(
      "kp :- shape(O,cube).\n"
      "kp :- color(O,red), size(O,large).",
      "kp");
  SceneRecord s{"s", {}, {}};
  s.objects.push_back(make_object("o1", 0.5, 0.5, {{"cube", 0.3}}, {{"red", 0.5}}, {{"large", 1.0}}));
  const InferenceResult r = run(p, s).result;
  EXPECT_DOUBLE_EQ(r.query_prob, 0.5);
  EXPECT_EQ(r.n_atoms, 2u);
  EXPECT_EQ(r.best_grounding->clause_index, 1u);
  EXPECT_DOUBLE_EQ(r.normalized_prob, std::sqrt(0.5));
}

TEST(Infer, TiesPreferLowestClauseThenBinding) {
  const RuleProgram p = parse_program(
      "kp :- color(O,red), size(O,large).\n"
      "kp :- shape(O,cube), size(O,large).",
      "kp");
  SceneRecord s{"s", {}, {}};
  s.objects.push_back(make_object("b", 0.2, 0.5, {{"cube", 0.5}}, {{"red", 0.5}}, {{"large", 1.0}}));
  s.objects.push_back(make_object("a", 0.8, 0.5, {{"cube", 0.5}}, {{"red", 0.5}}, {{"large", 1.0}}));
  const InferenceResult r = run(p, s).result;
  ASSERT_TRUE(r.best_grounding);
  EXPECT_EQ(r.best_grounding->clause_index, 0u);
  EXPECT_EQ(r.best_grounding->binding, (Binding{{"O", "a"}}));
}

TEST(Infer, WeightsScaleAndDisableClauses) {
  const RuleProgram p = parse_program(testing::kSphereOnCubeRule, "kp");
  const SceneRecord s = testing::sphere_on_cube_scene();
  const double full = run(p, s).result.query_prob;
  EXPECT_NEAR(run(p, s, ClauseWeights::uniform(1, 0.0)).result.query_prob, 0.5 * full, 1e-15);
  EXPECT_EQ(run(p, s, ClauseWeights::uniform(1, -kInf)).result.query_prob, 0.0);
  EXPECT_THROW(run(p, s, ClauseWeights::uniform(2, 0.0)), EvaluationError);
}

TEST(Infer, FactQueryIsNotNormalized) {
  const RuleProgram p = parse_program("kp.", "kp");
  const InferenceResult r = run(p, SceneRecord{"e", {}, {}}, ClauseWeights::uniform(1, 0.0)).result;
  EXPECT_EQ(r.n_atoms, 0u);
  EXPECT_EQ(r.query_prob, 0.5);
  EXPECT_EQ(r.normalized_prob, 0.5);
}

TEST(Infer, EmptySceneScoresZero) {
  const RuleProgram p = parse_program(testing::kSphereOnCubeRule, "kp");
  const InferenceResult r = evaluate_scene(p, SceneRecord{"e", {}, {}}, {}, ClauseWeights::from_program(p));
  EXPECT_EQ(r.query_prob, 0.0);
  EXPECT_EQ(r.normalized_prob, 0.0);
  EXPECT_FALSE(r.best_grounding);
}

TEST(Infer, CrispSatisfyingSceneScoresHigh) {
  for (const char* rule : {testing::kSphereOnCubeRule, testing::kSizedSpheresRule}) {
    const RuleProgram p = parse_program(rule, "kp");
    SceneRecord s = crisp_sphere_on_cube_scene();
    s.objects.push_back(make_object("small", 0.9, 0.1, {{"sphere", 1.0}}, {{"blue", 1.0}}, {{"small", 1.0}}));
    s.objects[0].size = {{"large", 1.0}};
    // The sized-spheres rule wants the large sphere below the cube.
    if (std::string_view(rule) == testing::kSizedSpheresRule) std::swap(s.objects[0].bbox, s.objects[1].bbox);
    ASSERT_TRUE(oracle::crisp_eval(oracle::crisp_from_detections(s), p));
    EXPECT_GE(evaluate_scene(p, s, {}, ClauseWeights::from_program(p)).normalized_prob, 0.99) << rule;
  }
}

TEST(Infer, StratifiedNegation) {
  const RuleProgram p = parse_program(
      "red(O) :- color(O,red).\n"
      "kp :- shape(A,sphere), not red(A).",
      "kp");
  SceneRecord s{"s", {}, {}};
  s.objects.push_back(make_object("o1", 0.5, 0.5, {{"sphere", 0.8}}, {{"red", 0.25}}));
  const InferenceResult r = run(p, s).result;
  EXPECT_DOUBLE_EQ(r.query_prob, 0.8 * 0.75);
  EXPECT_EQ(r.per_atom[1], (std::pair<std::string, double>{"not red(o1)", 0.75}));
}

TEST(Infer, PositiveRecursionConvergesAndCapIsEnforced) {
  // reach(X): X is reachable from a cube by stepping left.
  const RuleProgram p = parse_program(
      "reach(X) :- shape(X,cube).\n"
      "reach(X) :- reach(Y), position(X,Y,left).\n"
      "kp :- reach(A), color(A,red).",
      "kp");
  SceneRecord s{"s", {}, {}};
  s.objects.push_back(make_object("o1", 0.9, 0.5, {{"cube", 1.0}}, {}));
  s.objects.push_back(make_object("o2", 0.6, 0.5, {}, {}));
  s.objects.push_back(make_object("o3", 0.3, 0.5, {}, {}));
  s.objects.push_back(make_object("o4", 0.05, 0.5, {}, {{"red", 1.0}}));
  const Evaluated e = run(p, s);
  EXPECT_GT(e.result.query_prob, 0.99);
  EXPECT_GT(e.result.iterations, 3);

  InferOptions capped;
  capped.max_iters = 2;
  try {
    infer(e.table, e.program, ClauseWeights::from_program(p), capped);
    FAIL() << "expected non-convergence";
  } catch (const EvaluationError& err) {
    EXPECT_NE(std::string(err.what()).find("residual"), std::string::npos);
  }
  InferOptions bad_tol;
  bad_tol.tol = 0.0;
  EXPECT_THROW(infer(e.table, e.program, ClauseWeights::from_program(p), bad_tol), EvaluationError);
}

TEST(Normalize, RootOfQuery) {
  EXPECT_EQ(normalize(0.25, 2), 0.5);
  EXPECT_EQ(normalize(0.25, 0), 0.25);
  EXPECT_EQ(normalize(0.0, 3), 0.0);
  EXPECT_EQ(normalize(1.0, 7), 1.0);
}

}  // namespace
}  // namespace logicrank
