#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "logicrank/lang.hpp"
#include "logicrank/predicates.hpp"

namespace logicrank {

inline constexpr std::size_t kDefaultMaxObjects = 16;

/// Normalized, center-format box; y grows downward.
struct BoundingBox {
  double cx = 0.5;
  double cy = 0.5;
  double w = 0.1;
  double h = 0.1;

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

/// Converts a pixel-space corner box (x_min, y_min, width, height), as used
/// by COCO annotations, into a normalized center box.
BoundingBox bbox_from_corner(double x_min, double y_min, double width, double height,
                             double image_width, double image_height);

/// Value name -> probability. Missing mass is allowed; excess is not.
using Distribution = std::map<std::string, double>;

/// One row of the object-centric scene representation.
struct DetectedObject {
  std::string id;
  BoundingBox bbox;
  Distribution shape;
  Distribution color;
  Distribution size;
  Distribution klass;

  const Distribution& distribution(Attribute attribute) const;
  Distribution& distribution(Attribute attribute);

  friend bool operator==(const DetectedObject&, const DetectedObject&) = default;
};

/// One candidate image.
struct SceneRecord {
  std::string image_id;
  std::vector<DetectedObject> objects;
  std::map<std::string, double> external_scores;

  const DetectedObject* find(std::string_view object_id) const;

  friend bool operator==(const SceneRecord&, const SceneRecord&) = default;
};

/// Checks distribution bounds, box ranges and id uniqueness. Throws DataError.
void validate_scene(const SceneRecord& scene);

/// A pool line that could not be ingested; ranked as a zero-score candidate.
struct RejectedCandidate {
  std::string image_id;
  std::string reason;
};

/// Ordered candidate collection (the batch dimension).
struct ScenePool {
  std::vector<SceneRecord> scenes;
  std::vector<RejectedCandidate> rejected;

  std::size_t size() const { return scenes.size() + rejected.size(); }
  bool empty() const { return size() == 0; }
};

/// Parameters of the convert function; fixed, not learned.
struct ValuationConfig {
  /// Logistic slope of spatial relations, in normalized image units.
  double spatial_slope = 0.05;
  std::size_t max_objects = kDefaultMaxObjects;
};

/// Ground atoms valued directly from a scene, in canonical order (by
/// predicate, then argument names).
class GroundAtomTable {
 public:
  GroundAtomTable() = default;
  GroundAtomTable(std::vector<Atom> atoms, Eigen::VectorXd values);

  std::size_t size() const { return atoms_.size(); }
  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<std::string>& texts() const { return texts_; }
  const Eigen::VectorXd& values() const { return values_; }
  Eigen::VectorXd& values() { return values_; }

  std::optional<std::size_t> find(std::string_view atom_text) const;
  /// Value of an atom by canonical text; throws std::out_of_range if absent.
  double value(std::string_view atom_text) const;

 private:
  std::vector<Atom> atoms_;
  std::vector<std::string> texts_;
  Eigen::VectorXd values_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Probability of `attribute(obj, value)`: the distribution entry, or 0
/// when the detector did not report that value.
double value_attribute(const DetectedObject& obj, Attribute attribute, std::string_view value);

/// Same, with the attribute given by predicate name. Throws RuleError for
/// names outside {shape, color, size, class}.
double value_attribute(const DetectedObject& obj, std::string_view predicate,
                       std::string_view value);

/// Soft spatial relation `position(a, b, relation)`: logistic of the center
/// displacement divided by the configured slope. `right` reads "a is right
/// of b". Complementary relations sum to exactly 1.
double value_position(const DetectedObject& a, const DetectedObject& b, Relation relation,
                      const ValuationConfig& cfg);

/// P(at least k objects have attribute == value), objects treated as
/// independent trials.
double value_at_least(const SceneRecord& scene, Attribute attribute, std::string_view value, int k);

/// Enumerates and values every scene-valued ground atom reachable from the
/// program's body literals. Throws DataError if the scene has more objects
/// than cfg.max_objects.
GroundAtomTable build_atom_table(const SceneRecord& scene, const RuleProgram& program,
                                 const ValuationConfig& cfg);

/// Orders ground atoms canonically: predicate, then arguments (integers
/// compared numerically).
bool canonical_less(const Atom& a, const Atom& b);

}  // namespace logicrank
