#include <random>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "logicrank/errors.hpp"
#include "logicrank/oracle.hpp"
#include "logicrank/scene_gen.hpp"
#include "random_programs.hpp"

namespace logicrank {
namespace {

using oracle::CrispScene;
using testing::make_object;

CrispScene two_object_scene(const std::string& top_shape, const std::string& top_color,
                            const std::string& bottom_shape, const std::string& bottom_color) {
  SceneRecord s{"s", {}, {}};
  s.objects.push_back(make_object("obj1", 0.5, 0.2, {{top_shape, 1.0}}, {{top_color, 1.0}}));
  s.objects.push_back(make_object("obj2", 0.5, 0.8, {{bottom_shape, 1.0}}, {{bottom_color, 1.0}}));
  return oracle::crisp_from_detections(s);
}

CrispScene dogs(int count) {
  CrispScene s;
  for (int i = 0; i < count; ++i) s.objects.push_back({"d" + std::to_string(i), {{Attribute::kClass, "dog"}}});
  s.objects.push_back({"c", {{Attribute::kClass, "cat"}}});
  return s;
}

TEST(CrispFromDetections, ThresholdsAndStrictRelations) {
  SceneRecord s{"s", {}, {}};
  s.objects.push_back(make_object("a", 0.5, 0.2, {{"cube", 0.5}, {"sphere", 0.3}}, {{"red", 0.51}}));
  s.objects.push_back(make_object("b", 0.5, 0.8, {}, {}));
  const CrispScene c = oracle::crisp_from_detections(s);
  EXPECT_EQ(c.objects[0].labels.count(Attribute::kShape), 0u);
  EXPECT_EQ(c.objects[0].labels.at(Attribute::kColor), "red");
  EXPECT_EQ(c.relations.count({"a", "b", Relation::kAbove}), 1u);
  EXPECT_EQ(c.relations.count({"b", "a", Relation::kBelow}), 1u);
  EXPECT_EQ(c.relations.count({"a", "b", Relation::kLeft}), 0u);
  EXPECT_EQ(c.relations.count({"a", "b", Relation::kRight}), 0u);
}

TEST(CrispEval, WorkedExampleRule) {
  const RuleProgram p = parse_program(testing::kSphereOnCubeRule, "kp");
  EXPECT_TRUE(oracle::crisp_eval(two_object_scene("sphere", "blue", "cube", "red"), p));
  EXPECT_FALSE(oracle::crisp_eval(two_object_scene("sphere", "red", "cube", "blue"), p));
  EXPECT_FALSE(oracle::crisp_eval(two_object_scene("cube", "red", "sphere", "blue"), p));
}

TEST(CrispEval, ExactCounting) {
  BenchCountSpec spec;
  for (int i = 0; i <= 5; ++i) {
    const RuleProgram p = parse_program(counting_rule(spec, i), "kp_" + std::to_string(i));
    EXPECT_TRUE(oracle::crisp_eval(dogs(i), p)) << i;
    EXPECT_FALSE(oracle::crisp_eval(dogs(i + 1), p)) << i;
    if (i > 0) EXPECT_FALSE(oracle::crisp_eval(dogs(i - 1), p)) << i;
  }
}

TEST(CrispEval, InjectiveBindingsAndNegation) {
  const RuleProgram two = parse_program("kp :- shape(A,sphere), shape(B,sphere).", "kp");
  CrispScene one_sphere{{{"s", {{Attribute::kShape, "sphere"}}}}, {}};
  EXPECT_FALSE(oracle::crisp_eval(one_sphere, two));
  one_sphere.objects.push_back({"t", {{Attribute::kShape, "sphere"}}});
  EXPECT_TRUE(oracle::crisp_eval(one_sphere, two));

  const RuleProgram neg = parse_program("red(O) :- color(O,red).\nkp :- shape(A,cube), not red(A).", "kp");
  CrispScene cubes{{{"a", {{Attribute::kShape, "cube"}, {Attribute::kColor, "red"}}}}, {}};
  EXPECT_FALSE(oracle::crisp_eval(cubes, neg));
  cubes.objects.push_back({"b", {{Attribute::kShape, "cube"}, {Attribute::kColor, "blue"}}});
  EXPECT_TRUE(oracle::crisp_eval(cubes, neg));
}

TEST(CrispEval, RecursiveRules) {
  const RuleProgram p = parse_program(
      "reach(X) :- shape(X,cube).\n"
      "reach(X) :- reach(Y), position(X,Y,left).\n"
      "kp :- reach(A), color(A,red).",
      "kp");
  CrispScene s;
  s.objects = {{"o1", {{Attribute::kShape, "cube"}}}, {"o2", {{Attribute::kColor, "red"}}}};
  s.relations.insert({"o2", "o1", Relation::kLeft});
  EXPECT_TRUE(oracle::crisp_eval(s, p));
  s.relations.clear();
  s.relations.insert({"o2", "o1", Relation::kRight});
  EXPECT_FALSE(oracle::crisp_eval(s, p));
}

TEST(RecursiveFuzzy, ProductAndComposition) {
  const RuleProgram p = parse_program("kp :- shape(O,cube), color(O,red).", "kp");
  const SceneRecord s{"s", {make_object("o1", 0.5, 0.5, {{"cube", 0.9}}, {{"red", 0.5}})}, {}};
  const GroundAtomTable t = build_atom_table(s, p, {});
  EXPECT_DOUBLE_EQ(oracle::recursive_fuzzy_eval(t, ground(p, s, t), ClauseWeights::from_program(p)), 0.45);

  const RuleProgram chain = parse_program("q :- r.\nr :- shape(O,cube).", "q");
  const SceneRecord s2{"s", {make_object("o1", 0.5, 0.5, {{"cube", 0.7}}, {})}, {}};
  const GroundAtomTable t2 = build_atom_table(s2, chain, {});
  EXPECT_DOUBLE_EQ(oracle::recursive_fuzzy_eval(t2, ground(chain, s2, t2), ClauseWeights::from_program(chain)), 0.7);
}

TEST(RecursiveFuzzy, RejectsCycles) {
  const RuleProgram p = parse_program("kp :- kp, shape(O,cube).\nkp :- shape(O,cube).", "kp");
  const SceneRecord s{"s", {make_object("o1", 0.5, 0.5, {{"cube", 0.7}}, {})}, {}};
  const GroundAtomTable t = build_atom_table(s, p, {});
  EXPECT_THROW(oracle::recursive_fuzzy_eval(t, ground(p, s, t), ClauseWeights::from_program(p)), EvaluationError);
}

TEST(RecursiveFuzzy, AgreesWithInferOnRandomAcyclicPrograms) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 150; ++trial) {
    const testing::RandomInstance inst = testing::random_instance(rng);
    const GroundAtomTable table = build_atom_table(inst.scene, inst.program, {});
    const GroundProgram g = ground(inst.program, inst.scene, table);
    const Eigen::VectorXd expected = oracle::recursive_fuzzy_valuation(table, g, inst.weights);
    const Eigen::VectorXd actual = infer(table, g, inst.weights).valuation;
    ASSERT_LE((expected - actual).cwiseAbs().maxCoeff(), 1e-9) << inst.source;
  }
}

TEST(EnumerateCount, SmallCases) {
  EXPECT_DOUBLE_EQ(oracle::enumerate_count(std::vector<double>{0.5, 0.5}, 1), 0.75);
  EXPECT_DOUBLE_EQ(oracle::enumerate_count(std::vector<double>{0.37}, 1), 0.37);
  EXPECT_NEAR(oracle::enumerate_count(std::vector<double>{0.9, 0.8, 0.1}, 2), 0.746, 1e-15);
  EXPECT_EQ(oracle::enumerate_count(std::vector<double>{}, 0), 1.0);
  EXPECT_THROW(oracle::enumerate_count(std::vector<double>(21, 0.5), 1), std::invalid_argument);
}

}  // namespace
}  // namespace logicrank
