#include "logicrank/scene_io.hpp"

#include <fstream>
#include <set>

#include "logicrank/errors.hpp"

namespace logicrank {

using nlohmann::json;

namespace {

double number(const json& j, const std::string& what) {
  if (!j.is_number()) throw DataError(what + " must be a number");
  return j.get<double>();
}

Distribution read_distribution(const json& j, const std::string& what) {
  if (!j.is_object()) throw DataError(what + " must be an object of name -> probability");
  Distribution dist;
  for (const auto& [name, p] : j.items()) {
    dist.emplace(name, number(p, what + "." + name));
  }
  return dist;
}

}  // namespace

SceneRecord scene_from_json(const json& record) {
  if (!record.is_object()) throw DataError("scene record must be a JSON object");
  const auto version = record.find("schema_version");
  if (version == record.end()) throw DataError("missing schema_version");
  if (!version->is_number_integer() || version->get<long>() != kSchemaVersion) {
    throw DataError("unsupported schema_version " + version->dump());
  }
  const auto image_id = record.find("image_id");
  if (image_id == record.end() || !image_id->is_string()) {
    throw DataError("image_id must be a string");
  }

  SceneRecord scene;
  scene.image_id = image_id->get<std::string>();
  const std::string where = "scene '" + scene.image_id + "'";

  const auto objects = record.find("objects");
  if (objects == record.end() || !objects->is_array()) {
    throw DataError(where + ": objects must be an array");
  }
  for (std::size_t i = 0; i < objects->size(); ++i) {
    const json& o = (*objects)[i];
    const std::string at = where + ", object " + std::to_string(i);
    if (!o.is_object()) throw DataError(at + " must be an object");
    DetectedObject obj;
    if (auto id = o.find("id"); id != o.end()) {
      if (!id->is_string()) throw DataError(at + ": id must be a string");
      obj.id = id->get<std::string>();
    } else {
      obj.id = "obj" + std::to_string(i + 1);
    }
    const auto bbox = o.find("bbox");
    if (bbox == o.end() || !bbox->is_array() || bbox->size() != 4) {
      throw DataError(at + ": bbox must be [cx, cy, w, h]");
    }
    obj.bbox = {number((*bbox)[0], at + ".bbox"), number((*bbox)[1], at + ".bbox"),
                number((*bbox)[2], at + ".bbox"), number((*bbox)[3], at + ".bbox")};
    for (Attribute a : {Attribute::kShape, Attribute::kColor, Attribute::kSize, Attribute::kClass}) {
      const std::string key(attribute_name(a));
      if (auto d = o.find(key); d != o.end()) {
        obj.distribution(a) = read_distribution(*d, at + "." + key);
      }
    }
    scene.objects.push_back(std::move(obj));
  }

  if (auto scores = record.find("external_scores"); scores != record.end()) {
    if (!scores->is_object()) throw DataError(where + ": external_scores must be an object");
    for (const auto& [name, v] : scores->items()) {
      scene.external_scores.emplace(name, number(v, where + ".external_scores." + name));
    }
  }

  validate_scene(scene);
  return scene;
}

nlohmann::ordered_json scene_to_json(const SceneRecord& scene) {
  nlohmann::ordered_json out;
  out["schema_version"] = kSchemaVersion;
  out["image_id"] = scene.image_id;
  auto objects = nlohmann::ordered_json::array();
  for (const auto& obj : scene.objects) {
    nlohmann::ordered_json o;
    o["id"] = obj.id;
    o["bbox"] = {obj.bbox.cx, obj.bbox.cy, obj.bbox.w, obj.bbox.h};
    for (Attribute a : {Attribute::kShape, Attribute::kColor, Attribute::kSize, Attribute::kClass}) {
      const Distribution& dist = obj.distribution(a);
      if (dist.empty()) continue;
      auto& d = o[std::string(attribute_name(a))] = nlohmann::ordered_json::object();
      for (const auto& [name, p] : dist) d[name] = p;
    }
    objects.push_back(std::move(o));
  }
  out["objects"] = std::move(objects);
  if (!scene.external_scores.empty()) {
    auto& s = out["external_scores"] = nlohmann::ordered_json::object();
    for (const auto& [name, v] : scene.external_scores) s[name] = v;
  }
  return out;
}

SceneRecord read_scene_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  json record;
  try {
    in >> record;
  } catch (const json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
  return scene_from_json(record);
}

ScenePool read_pool(std::istream& in) {
  ScenePool pool;
  std::set<std::string> seen;
  auto claim = [&](const std::string& id) {
    if (!seen.insert(id).second) throw DataError("duplicate image_id '" + id + "' in pool");
  };

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json record;
    try {
      record = json::parse(line);
    } catch (const json::exception& e) {
      const std::string id = "line:" + std::to_string(line_no);
      claim(id);
      pool.rejected.push_back({id, "invalid JSON: " + std::string(e.what())});
      continue;
    }
    std::optional<SceneRecord> scene;
    std::string reason;
    try {
      scene = scene_from_json(record);
    } catch (const DataError& e) {
      reason = e.what();
    }
    if (scene) {
      claim(scene->image_id);
      pool.scenes.push_back(std::move(*scene));
      continue;
    }
    std::string id = "line:" + std::to_string(line_no);
    if (record.is_object()) {
      if (auto it = record.find("image_id"); it != record.end() && it->is_string()) {
        id = it->get<std::string>();
      }
    }
    claim(id);
    pool.rejected.push_back({id, reason});
  }
  return pool;
}

ScenePool read_pool_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return read_pool(in);
}

void write_pool(std::ostream& out, const std::vector<SceneRecord>& scenes) {
  for (const auto& scene : scenes) out << scene_to_json(scene).dump() << '\n';
}

}  // namespace logicrank
