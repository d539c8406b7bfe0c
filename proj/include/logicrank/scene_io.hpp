#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "logicrank/scene.hpp"

namespace logicrank {

inline constexpr int kSchemaVersion = 1;

/// Parses one detections record. Unknown fields are ignored; a missing or
/// different `schema_version` is rejected. Objects without an `id` are
/// named obj1, obj2, ... in array order. Throws DataError.
SceneRecord scene_from_json(const nlohmann::json& record);

/// Serializes a scene in the detections format (schema_version 1).
nlohmann::ordered_json scene_to_json(const SceneRecord& scene);

SceneRecord read_scene_file(const std::filesystem::path& path);

/// Reads a JSONL candidate pool; pool order is line order. Blank lines are
/// skipped. Lines that fail to parse are kept as rejected candidates (named
/// by their image_id when readable, otherwise `line:N`). Throws DataError
/// if the file cannot be read or two candidates share an image_id.
ScenePool read_pool(std::istream& in);
ScenePool read_pool_file(const std::filesystem::path& path);

void write_pool(std::ostream& out, const std::vector<SceneRecord>& scenes);

}  // namespace logicrank
