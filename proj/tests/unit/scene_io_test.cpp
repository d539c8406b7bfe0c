#include <sstream>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "logicrank/errors.hpp"
#include "logicrank/scene_io.hpp"

namespace logicrank {
namespace {

using nlohmann::json;

TEST(SceneFromJson, ReadsDetectionsRecord) {
  const json j = json::parse(R"({
    "schema_version": 1, "image_id": "img7", "extra": [1, 2],
    "objects": [
      {"bbox": [0.5, 0.1, 0.1, 0.1], "shape": {"sphere": 1.0}, "color": {"blue": 0.95}, "note": "x"},
      {"id": "cube", "bbox": [0.5, 0.9, 0.2, 0.2], "class": {"dog": 0.9}}
    ],
    "external_scores": {"baseline": 0.31}
  })");
  const SceneRecord s = scene_from_json(j);
  EXPECT_EQ(s.image_id, "img7");
  ASSERT_EQ(s.objects.size(), 2u);
  EXPECT_EQ(s.objects[0].id, "obj1");
  EXPECT_EQ(s.objects[1].id, "cube");
  EXPECT_EQ(s.objects[0].color.at("blue"), 0.95);
  EXPECT_EQ(s.objects[1].klass.at("dog"), 0.9);
  EXPECT_TRUE(s.objects[1].shape.empty());
  EXPECT_EQ(s.external_scores.at("baseline"), 0.31);
}

TEST(SceneFromJson, RejectsSchemaViolations) {
  const auto bad = [](const char* text) { return scene_from_json(json::parse(text)); };
  EXPECT_THROW(bad(R"({"image_id": "a", "objects": []})"), DataError);
  EXPECT_THROW(bad(R"({"schema_version": 2, "image_id": "a", "objects": []})"), DataError);
  EXPECT_THROW(bad(R"({"schema_version": 1, "image_id": 3, "objects": []})"), DataError);
  EXPECT_THROW(bad(R"({"schema_version": 1, "image_id": "a"})"), DataError);
  EXPECT_THROW(bad(R"({"schema_version": 1, "image_id": "a", "objects": [{"bbox": [0.5, 0.5, 0.1]}]})"),
               DataError);
  EXPECT_THROW(bad(R"({"schema_version": 1, "image_id": "a",
                       "objects": [{"bbox": [0.5, 0.5, 0.1, 0.1], "shape": {"cube": "high"}}]})"),
               DataError);
  EXPECT_THROW(bad(R"({"schema_version": 1, "image_id": "a",
                       "objects": [{"bbox": [0.5, 0.5, 0.1, 0.1], "shape": {"cube": 0.7, "sphere": 0.7}}]})"),
               DataError);
  EXPECT_NO_THROW(bad(R"({"schema_version": 1, "image_id": "a", "objects": []})"));
}

TEST(SceneJson, RoundTrip) {
  SceneRecord s = testing::sphere_on_cube_scene();
  s.external_scores["baseline"] = 0.25;
  s.objects[0].size = {{"large", 0.7}};
  const SceneRecord back = scene_from_json(json::parse(scene_to_json(s).dump()));
  EXPECT_EQ(back, s);
}

TEST(ReadPool, KeepsOrderAndRejectsBadLines) {
  std::istringstream in(
      R"({"schema_version": 1, "image_id": "b", "objects": []})"
      "\n\n"
      R"({"schema_version": 1, "image_id": "a", "objects": [{"bbox": [2, 0.5, 0.1, 0.1]}]})"
      "\n"
      "not json\n"
      R"({"schema_version": 1, "image_id": "c", "objects": []})"
      "\n");
  const ScenePool pool = read_pool(in);
  ASSERT_EQ(pool.scenes.size(), 2u);
  EXPECT_EQ(pool.scenes[0].image_id, "b");
  EXPECT_EQ(pool.scenes[1].image_id, "c");
  ASSERT_EQ(pool.rejected.size(), 2u);
  EXPECT_EQ(pool.rejected[0].image_id, "a");
  EXPECT_EQ(pool.rejected[1].image_id, "line:4");
  EXPECT_EQ(pool.size(), 4u);
}

TEST(ReadPool, DuplicateImageIdsAreAnError) {
  std::istringstream in(
      R"({"schema_version": 1, "image_id": "a", "objects": []})"
      "\n"
      R"({"schema_version": 1, "image_id": "a", "objects": []})"
      "\n");
  EXPECT_THROW(read_pool(in), DataError);
  EXPECT_THROW(read_pool_file("/nonexistent/pool.jsonl"), DataError);
}

TEST(WritePool, ReadsBackIdentically) {
  std::vector<SceneRecord> scenes{testing::sphere_on_cube_scene(), SceneRecord{"empty", {}, {}}};
  std::ostringstream out;
  write_pool(out, scenes);
  std::istringstream in(out.str());
  const ScenePool pool = read_pool(in);
  EXPECT_EQ(pool.scenes, scenes);
  EXPECT_TRUE(pool.rejected.empty());
}

}  // namespace
}  // namespace logicrank
