#include "logicrank/scene.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <stdexcept>
#include <tuple>

#include "logicrank/errors.hpp"
#include "logicrank/numeric.hpp"

namespace logicrank {

BoundingBox bbox_from_corner(double x_min, double y_min, double width, double height,
                             double image_width, double image_height) {
  return {(x_min + width / 2.0) / image_width, (y_min + height / 2.0) / image_height,
          width / image_width, height / image_height};
}

const Distribution& DetectedObject::distribution(Attribute attribute) const {
  switch (attribute) {
    case Attribute::kShape: return shape;
    case Attribute::kColor: return color;
    case Attribute::kSize: return size;
    case Attribute::kClass: return klass;
  }
  return shape;
}

Distribution& DetectedObject::distribution(Attribute attribute) {
  return const_cast<Distribution&>(std::as_const(*this).distribution(attribute));
}

const DetectedObject* SceneRecord::find(std::string_view object_id) const {
  for (const auto& obj : objects) {
    if (obj.id == object_id) return &obj;
  }
  return nullptr;
}

void validate_scene(const SceneRecord& scene) {
  const std::string where = "scene '" + scene.image_id + "'";
  std::set<std::string_view> ids;
  for (const auto& obj : scene.objects) {
    if (obj.id.empty()) throw DataError(where + ": object with empty id");
    if (!ids.insert(obj.id).second) {
      throw DataError(where + ": duplicate object id '" + obj.id + "'");
    }
    const auto& b = obj.bbox;
    if (!(b.w > 0.0 && b.h > 0.0 && b.w <= 1.0 && b.h <= 1.0)) {
      throw DataError(where + ", object '" + obj.id + "': box width/height must be in (0, 1]");
    }
    if (!(b.cx >= 0.0 && b.cx <= 1.0 && b.cy >= 0.0 && b.cy <= 1.0)) {
      throw DataError(where + ", object '" + obj.id + "': box center must be in [0, 1]");
    }
    for (Attribute a : {Attribute::kShape, Attribute::kColor, Attribute::kSize, Attribute::kClass}) {
      double mass = 0.0;
      for (const auto& [name, p] : obj.distribution(a)) {
        if (!(p >= 0.0 && p <= 1.0)) {
          throw DataError(where + ", object '" + obj.id + "': " + std::string(attribute_name(a)) +
                          " probability for '" + name + "' outside [0, 1]");
        }
        mass += p;
      }
      if (mass > 1.0 + 1e-6) {
        throw DataError(where + ", object '" + obj.id + "': " + std::string(attribute_name(a)) +
                        " distribution sums to more than 1");
      }
    }
  }
}

// --- ground atom table -----------------------------------------------------------

GroundAtomTable::GroundAtomTable(std::vector<Atom> atoms, Eigen::VectorXd values)
    : atoms_(std::move(atoms)), values_(std::move(values)) {
  if (static_cast<Eigen::Index>(atoms_.size()) != values_.size()) {
    throw std::invalid_argument("GroundAtomTable: atoms and values differ in length");
  }
  texts_.reserve(atoms_.size());
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    texts_.push_back(format_atom(atoms_[i]));
    index_.emplace(texts_.back(), i);
  }
}

std::optional<std::size_t> GroundAtomTable::find(std::string_view atom_text) const {
  auto it = index_.find(std::string(atom_text));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

double GroundAtomTable::value(std::string_view atom_text) const {
  auto i = find(atom_text);
  if (!i) throw std::out_of_range("no ground atom " + std::string(atom_text));
  return values_(static_cast<Eigen::Index>(*i));
}

namespace {

std::optional<long> as_integer(std::string_view s) {
  long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

bool term_less(const Term& a, const Term& b) {
  const auto ia = as_integer(a.name);
  const auto ib = as_integer(b.name);
  if (ia && ib) return *ia < *ib;
  return a.name < b.name;
}

Atom ground_atom(std::string predicate, std::initializer_list<std::string> args) {
  Atom atom{std::move(predicate), {}};
  for (const auto& a : args) atom.args.push_back(Term::constant(a));
  return atom;
}

}  // namespace

bool canonical_less(const Atom& a, const Atom& b) {
  if (a.predicate != b.predicate) return a.predicate < b.predicate;
  return std::lexicographical_compare(a.args.begin(), a.args.end(), b.args.begin(), b.args.end(),
                                      term_less);
}

// --- valuation -----------------------------------------------------------------

double value_attribute(const DetectedObject& obj, Attribute attribute, std::string_view value) {
  const Distribution& dist = obj.distribution(attribute);
  auto it = dist.find(std::string(value));
  return it == dist.end() ? 0.0 : it->second;
}

double value_attribute(const DetectedObject& obj, std::string_view predicate,
                       std::string_view value) {
  const auto attribute = attribute_from_name(predicate);
  if (!attribute) {
    throw RuleError(RuleError::Kind::kInvalidArgument, {},
                    "unknown attribute predicate '" + std::string(predicate) + "'");
  }
  return value_attribute(obj, *attribute, value);
}

double value_position(const DetectedObject& a, const DetectedObject& b, Relation relation,
                      const ValuationConfig& cfg) {
  // Each pair shares one displacement so that opposite relations are exact
  // complements.
  const double tau = cfg.spatial_slope;
  switch (relation) {
    case Relation::kAbove: return logistic_pair((b.bbox.cy - a.bbox.cy) / tau).first;
    case Relation::kBelow: return logistic_pair((b.bbox.cy - a.bbox.cy) / tau).second;
    case Relation::kRight: return logistic_pair((a.bbox.cx - b.bbox.cx) / tau).first;
    case Relation::kLeft: return logistic_pair((a.bbox.cx - b.bbox.cx) / tau).second;
  }
  return 0.0;
}

double value_at_least(const SceneRecord& scene, Attribute attribute, std::string_view value, int k) {
  // Trials are folded in id order so the rounding does not depend on the
  // order objects were listed in.
  std::vector<const DetectedObject*> objects;
  for (const auto& obj : scene.objects) objects.push_back(&obj);
  std::sort(objects.begin(), objects.end(),
            [](const DetectedObject* a, const DetectedObject* b) { return a->id < b->id; });
  Eigen::VectorXd probs(static_cast<Eigen::Index>(objects.size()));
  for (std::size_t e = 0; e < objects.size(); ++e) {
    probs(static_cast<Eigen::Index>(e)) = value_attribute(*objects[e], attribute, value);
  }
  return poisson_binomial_tail(probs, k);
}

GroundAtomTable build_atom_table(const SceneRecord& scene, const RuleProgram& program,
                                 const ValuationConfig& cfg) {
  if (scene.objects.size() > cfg.max_objects) {
    throw DataError("scene '" + scene.image_id + "' has " + std::to_string(scene.objects.size()) +
                    " objects, more than the cap of " + std::to_string(cfg.max_objects));
  }

  std::set<std::pair<Attribute, std::string>> attribute_values;
  std::set<Relation> relations;
  std::set<std::tuple<Attribute, std::string, int>> counts;
  for (const auto& clause : program.clauses) {
    for (const auto& lit : clause.body) {
      const Atom& atom = lit.atom;
      if (auto attr = attribute_from_name(atom.predicate); attr && atom.arity() == 2) {
        attribute_values.emplace(*attr, atom.args[1].name);
      } else if (atom.predicate == kPositionPredicate) {
        relations.insert(*relation_from_name(atom.args[2].name));
      } else if (atom.predicate == kAtLeastPredicate) {
        counts.emplace(*attribute_from_name(atom.args[0].name), atom.args[1].name,
                       static_cast<int>(*as_integer(atom.args[2].name)));
      }
    }
  }

  std::vector<std::pair<Atom, double>> entries;
  for (const auto& obj : scene.objects) {
    for (const auto& [attr, value] : attribute_values) {
      entries.emplace_back(ground_atom(std::string(attribute_name(attr)), {obj.id, value}),
                           value_attribute(obj, attr, value));
    }
    for (const auto& other : scene.objects) {
      if (&other == &obj) continue;
      for (Relation rel : relations) {
        entries.emplace_back(ground_atom(std::string(kPositionPredicate),
                                         {obj.id, other.id, std::string(relation_name(rel))}),
                             value_position(obj, other, rel, cfg));
      }
    }
  }
  for (const auto& [attr, value, k] : counts) {
    entries.emplace_back(ground_atom(std::string(kAtLeastPredicate),
                                     {std::string(attribute_name(attr)), value, std::to_string(k)}),
                         value_at_least(scene, attr, value, k));
  }

  std::sort(entries.begin(), entries.end(),
            [](const auto& x, const auto& y) { return canonical_less(x.first, y.first); });

  std::vector<Atom> atoms;
  Eigen::VectorXd values(static_cast<Eigen::Index>(entries.size()));
  atoms.reserve(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    atoms.push_back(std::move(entries[i].first));
    values(static_cast<Eigen::Index>(i)) = entries[i].second;
  }
  return GroundAtomTable(std::move(atoms), std::move(values));
}

}  // namespace logicrank
