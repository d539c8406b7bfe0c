#pragma once

#include <array>
#include <optional>
#include <span>
#include <string_view>

namespace logicrank {

/// Detector-valued attribute families.
enum class Attribute { kShape, kColor, kSize, kClass };

enum class Relation { kAbove, kBelow, kLeft, kRight };

std::optional<Attribute> attribute_from_name(std::string_view name);
std::string_view attribute_name(Attribute attribute);

std::optional<Relation> relation_from_name(std::string_view name);
std::string_view relation_name(Relation relation);

/// Role of one argument position of a built-in predicate.
enum class ArgRole {
  kObject,     // variable or object id
  kValue,      // attribute value constant, e.g. `sphere`
  kRelation,   // above | below | left | right
  kAttribute,  // shape | color | size | class
  kCount,      // non-negative integer
};

/// Predicate registry: the predicates valued directly from a scene.
///
///   shape(O, V)  color(O, V)  size(O, V)  class(O, V)
///   position(A, B, Rel)
///   at_least(Attr, V, K)
struct BuiltinPredicate {
  std::string_view name;
  std::span<const ArgRole> roles;
};

const BuiltinPredicate* find_builtin(std::string_view name);
inline bool is_builtin(std::string_view name) { return find_builtin(name) != nullptr; }

inline constexpr std::string_view kPositionPredicate = "position";
inline constexpr std::string_view kAtLeastPredicate = "at_least";

}  // namespace logicrank
