#include "fixtures.hpp"

namespace logicrank::testing {

DetectedObject make_object(std::string id, double cx, double cy, Distribution shape,
                           Distribution color, Distribution size, Distribution klass) {
  DetectedObject obj;
  obj.id = std::move(id);
  obj.bbox = {cx, cy, 0.1, 0.1};
  obj.shape = std::move(shape);
  obj.color = std::move(color);
  obj.size = std::move(size);
  obj.klass = std::move(klass);
  return obj;
}

SceneRecord sphere_on_cube_scene() {
  SceneRecord scene;
  scene.image_id = "example";
  scene.objects.push_back(make_object("obj1", 0.5, 0.1, {{"sphere", 1.0}}, {{"blue", 0.95}}));
  scene.objects.push_back(
      make_object("obj2", 0.5, 0.9, {{"cube", 0.58}, {"sphere", 0.40}}, {{"red", 0.83}}));
  return scene;
}

}  // namespace logicrank::testing
