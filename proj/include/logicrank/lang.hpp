#pragma once

#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "logicrank/errors.hpp"

namespace logicrank {

/// Weight parameter assigned to every parsed clause. It maps through the
/// logistic to a weight of exactly 1, so unweighted programs score as plain
/// product logic.
inline constexpr double kDefaultWeightParam = std::numeric_limits<double>::infinity();

struct Term {
  enum class Kind { kVariable, kConstant };

  Kind kind = Kind::kConstant;
  std::string name;

  static Term variable(std::string name) { return {Kind::kVariable, std::move(name)}; }
  static Term constant(std::string name) { return {Kind::kConstant, std::move(name)}; }

  bool is_variable() const { return kind == Kind::kVariable; }

  friend bool operator==(const Term&, const Term&) = default;
};

struct Atom {
  std::string predicate;
  std::vector<Term> args;

  std::size_t arity() const { return args.size(); }
  bool is_ground() const;

  friend bool operator==(const Atom&, const Atom&) = default;
};

struct Literal {
  Atom atom;
  bool negated = false;

  friend bool operator==(const Literal&, const Literal&) = default;
};

struct Clause {
  Atom head;
  std::vector<Literal> body;
  double weight_param = kDefaultWeightParam;
  SourceSpan span;

  /// Variables in order of first appearance, head first.
  std::vector<std::string> variables() const;

  /// Structural equality; the source span is ignored.
  friend bool operator==(const Clause& a, const Clause& b) {
    return a.head == b.head && a.body == b.body && a.weight_param == b.weight_param;
  }
};

/// A validated, stratified rule program.
///
/// Only `parse_program` and `validate` produce instances; the derived
/// tables (`arities`, `strata`) are filled in by validation.
struct RuleProgram {
  std::vector<Clause> clauses;
  std::string query;

  /// Arity of every user-defined predicate that occurs in the program.
  std::map<std::string, std::size_t> arities;
  /// Evaluation stratum of every user-defined predicate (0-based).
  std::map<std::string, int> strata;

  int stratum_count() const;

  friend bool operator==(const RuleProgram& a, const RuleProgram& b) {
    return a.clauses == b.clauses && a.query == b.query;
  }
};

/// Object-variable substitution, ordered by first appearance of the variable.
using Binding = std::vector<std::pair<std::string, std::string>>;

std::optional<std::string> lookup(const Binding& binding, std::string_view variable);

/// Parses and validates a rule program whose target predicate is `query`.
/// Throws RuleError naming the offending clause position.
RuleProgram parse_program(std::string_view source, std::string_view query);

/// Validates clauses assembled in code and computes the derived tables.
RuleProgram validate(std::vector<Clause> clauses, std::string query);

/// Canonical text `pred(arg1, arg2)` with variables replaced by the object
/// ids they are bound to. Throws RuleError if a variable is unbound.
std::string format_atom(const Atom& atom, const Binding& binding);

/// Canonical text of an atom as written (variables printed by name).
std::string format_atom(const Atom& atom);

std::string format_literal(const Literal& literal, const Binding& binding);

/// Renders a program in the concrete rule syntax; parse_program accepts the
/// output and yields a structurally equal program.
std::string print_program(const RuleProgram& program);

}  // namespace logicrank
