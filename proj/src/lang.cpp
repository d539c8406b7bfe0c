#include "logicrank/lang.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <sstream>

#include "logicrank/predicates.hpp"

namespace logicrank {

// --- predicate registry -----------------------------------------------------

namespace {

constexpr std::array<ArgRole, 2> kAttributeRoles{ArgRole::kObject, ArgRole::kValue};
constexpr std::array<ArgRole, 3> kPositionRoles{ArgRole::kObject, ArgRole::kObject,
                                                ArgRole::kRelation};
constexpr std::array<ArgRole, 3> kAtLeastRoles{ArgRole::kAttribute, ArgRole::kValue,
                                               ArgRole::kCount};

constexpr std::array<BuiltinPredicate, 6> kBuiltins{{
    {"shape", kAttributeRoles},
    {"color", kAttributeRoles},
    {"size", kAttributeRoles},
    {"class", kAttributeRoles},
    {kPositionPredicate, kPositionRoles},
    {kAtLeastPredicate, kAtLeastRoles},
}};

constexpr std::array<std::string_view, 4> kAttributeNames{"shape", "color", "size", "class"};
constexpr std::array<std::string_view, 4> kRelationNames{"above", "below", "left", "right"};

}  // namespace

const BuiltinPredicate* find_builtin(std::string_view name) {
  for (const auto& b : kBuiltins) {
    if (b.name == name) return &b;
  }
  return nullptr;
}

std::optional<Attribute> attribute_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kAttributeNames.size(); ++i) {
    if (kAttributeNames[i] == name) return static_cast<Attribute>(i);
  }
  return std::nullopt;
}

std::string_view attribute_name(Attribute attribute) {
  return kAttributeNames[static_cast<std::size_t>(attribute)];
}

std::optional<Relation> relation_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kRelationNames.size(); ++i) {
    if (kRelationNames[i] == name) return static_cast<Relation>(i);
  }
  return std::nullopt;
}

std::string_view relation_name(Relation relation) {
  return kRelationNames[static_cast<std::size_t>(relation)];
}

// --- AST helpers --------------------------------------------------------------

RuleError::RuleError(Kind kind, SourceSpan span, const std::string& message,
                     std::vector<std::string> expected)
    : std::runtime_error(std::to_string(span.line) + ":" + std::to_string(span.column) + ": " +
                         message),
      kind_(kind),
      span_(span),
      expected_(std::move(expected)) {}

bool Atom::is_ground() const {
  return std::none_of(args.begin(), args.end(), [](const Term& t) { return t.is_variable(); });
}

std::vector<std::string> Clause::variables() const {
  std::vector<std::string> vars;
  auto visit = [&](const Atom& atom) {
    for (const auto& t : atom.args) {
      if (t.is_variable() && std::find(vars.begin(), vars.end(), t.name) == vars.end()) {
        vars.push_back(t.name);
      }
    }
  };
  visit(head);
  for (const auto& lit : body) visit(lit.atom);
  return vars;
}

int RuleProgram::stratum_count() const {
  int top = -1;
  for (const auto& [_, s] : strata) top = std::max(top, s);
  return top + 1;
}

std::optional<std::string> lookup(const Binding& binding, std::string_view variable) {
  for (const auto& [var, obj] : binding) {
    if (var == variable) return obj;
  }
  return std::nullopt;
}

std::string format_atom(const Atom& atom, const Binding& binding) {
  std::string out = atom.predicate;
  if (atom.args.empty()) return out;
  out += '(';
  for (std::size_t i = 0; i < atom.args.size(); ++i) {
    if (i > 0) out += ", ";
    const Term& t = atom.args[i];
    if (t.is_variable()) {
      auto obj = lookup(binding, t.name);
      if (!obj) {
        throw RuleError(RuleError::Kind::kUnboundVariable, {},
                        "unbound variable " + t.name + " in " + format_atom(atom));
      }
      out += *obj;
    } else {
      out += t.name;
    }
  }
  out += ')';
  return out;
}

std::string format_atom(const Atom& atom) {
  std::string out = atom.predicate;
  if (atom.args.empty()) return out;
  out += '(';
  for (std::size_t i = 0; i < atom.args.size(); ++i) {
    if (i > 0) out += ", ";
    out += atom.args[i].name;
  }
  out += ')';
  return out;
}

std::string format_literal(const Literal& literal, const Binding& binding) {
  return (literal.negated ? "not " : "") + format_atom(literal.atom, binding);
}

std::string print_program(const RuleProgram& program) {
  std::ostringstream out;
  for (const auto& clause : program.clauses) {
    out << format_atom(clause.head);
    for (std::size_t i = 0; i < clause.body.size(); ++i) {
      out << (i == 0 ? " :- " : ", ");
      if (clause.body[i].negated) out << "not ";
      out << format_atom(clause.body[i].atom);
    }
    out << ".\n";
  }
  return out.str();
}

// --- validation ---------------------------------------------------------------

namespace {

using Kind = RuleError::Kind;

bool is_integer(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

void check_builtin_args(const Atom& atom, const BuiltinPredicate& builtin, SourceSpan span) {
  if (atom.arity() != builtin.roles.size()) {
    throw RuleError(Kind::kArity, span,
                    "predicate " + atom.predicate + " expects " +
                        std::to_string(builtin.roles.size()) + " arguments, got " +
                        std::to_string(atom.arity()));
  }
  for (std::size_t i = 0; i < atom.args.size(); ++i) {
    const Term& t = atom.args[i];
    const ArgRole role = builtin.roles[i];
    if (role == ArgRole::kObject) continue;
    if (t.is_variable()) {
      throw RuleError(Kind::kInvalidArgument, span,
                      "variable " + t.name + " in constant position " + std::to_string(i + 1) +
                          " of " + atom.predicate);
    }
    switch (role) {
      case ArgRole::kRelation:
        if (!relation_from_name(t.name)) {
          throw RuleError(Kind::kInvalidArgument, span,
                          "unknown relation '" + t.name + "' (expected above, below, left, right)");
        }
        break;
      case ArgRole::kAttribute:
        if (!attribute_from_name(t.name)) {
          throw RuleError(Kind::kInvalidArgument, span,
                          "unknown attribute '" + t.name + "' (expected shape, color, size, class)");
        }
        break;
      case ArgRole::kCount:
        if (!is_integer(t.name)) {
          throw RuleError(Kind::kInvalidArgument, span,
                          "count argument of " + atom.predicate + " must be an integer");
        }
        break;
      case ArgRole::kValue:
      case ArgRole::kObject:
        break;
    }
  }
}

// Tarjan SCC over the user-predicate dependency graph.
struct DependencyGraph {
  struct Edge {
    int to;
    bool negative;
    SourceSpan span;
  };

  std::vector<std::string> names;
  std::map<std::string, int> index;
  std::vector<std::vector<Edge>> edges;

  int node(const std::string& name) {
    auto [it, inserted] = index.emplace(name, static_cast<int>(names.size()));
    if (inserted) {
      names.push_back(name);
      edges.emplace_back();
    }
    return it->second;
  }

  std::vector<int> components() const {
    const int n = static_cast<int>(names.size());
    std::vector<int> comp(n, -1), low(n, 0), order(n, -1), stack;
    std::vector<bool> on_stack(n, false);
    int counter = 0, ncomp = 0;
    std::function<void(int)> visit = [&](int v) {
      order[v] = low[v] = counter++;
      stack.push_back(v);
      on_stack[v] = true;
      for (const auto& e : edges[v]) {
        if (order[e.to] < 0) {
          visit(e.to);
          low[v] = std::min(low[v], low[e.to]);
        } else if (on_stack[e.to]) {
          low[v] = std::min(low[v], order[e.to]);
        }
      }
      if (low[v] == order[v]) {
        int w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = ncomp;
        } while (w != v);
        ++ncomp;
      }
    };
    for (int v = 0; v < n; ++v) {
      if (order[v] < 0) visit(v);
    }
    return comp;
  }
};

}  // namespace

RuleProgram validate(std::vector<Clause> clauses, std::string query) {
  RuleProgram program;
  program.query = std::move(query);

  std::map<std::string, std::size_t>& arities = program.arities;
  auto check_user_arity = [&](const Atom& atom, SourceSpan span) {
    auto [it, inserted] = arities.emplace(atom.predicate, atom.arity());
    if (!inserted && it->second != atom.arity()) {
      throw RuleError(Kind::kArity, span,
                      "predicate " + atom.predicate + " used with arity " +
                          std::to_string(atom.arity()) + ", previously " +
                          std::to_string(it->second));
    }
  };

  for (const auto& clause : clauses) {
    const SourceSpan span = clause.span;
    if (is_builtin(clause.head.predicate)) {
      throw RuleError(Kind::kInvalidArgument, span,
                      "cannot define built-in predicate " + clause.head.predicate);
    }
    check_user_arity(clause.head, span);
    std::set<std::string> positive_vars;
    for (const auto& lit : clause.body) {
      if (const auto* builtin = find_builtin(lit.atom.predicate)) {
        check_builtin_args(lit.atom, *builtin, span);
      } else {
        check_user_arity(lit.atom, span);
      }
      if (!lit.negated) {
        for (const auto& t : lit.atom.args) {
          if (t.is_variable()) positive_vars.insert(t.name);
        }
      }
    }
    if (clause.body.empty() && !clause.head.is_ground()) {
      throw RuleError(Kind::kUnsafeVariable, span,
                      "fact " + format_atom(clause.head) + " must be ground");
    }
    for (const auto& t : clause.head.args) {
      if (t.is_variable() && !positive_vars.count(t.name)) {
        throw RuleError(Kind::kUnsafeVariable, span,
                        "head variable " + t.name + " does not occur in a positive body literal");
      }
    }
  }

  // Query must be a nullary head.
  const auto query_clause = std::find_if(clauses.begin(), clauses.end(), [&](const Clause& c) {
    return c.head.predicate == program.query;
  });
  if (query_clause == clauses.end()) {
    throw RuleError(Kind::kUnknownQuery, clauses.empty() ? SourceSpan{} : clauses.back().span,
                    "query predicate '" + program.query + "' is not the head of any clause");
  }
  if (query_clause->head.arity() != 0) {
    throw RuleError(Kind::kUnknownQuery, query_clause->span,
                    "query predicate '" + program.query + "' must be nullary");
  }

  DependencyGraph graph;
  for (const auto& clause : clauses) {
    const int head = graph.node(clause.head.predicate);
    for (const auto& lit : clause.body) {
      if (is_builtin(lit.atom.predicate)) continue;
      const int from = graph.node(lit.atom.predicate);
      graph.edges[from].push_back({head, lit.negated, clause.span});
    }
  }
  const std::vector<int> comp = graph.components();
  const int n = static_cast<int>(graph.names.size());
  for (int v = 0; v < n; ++v) {
    for (const auto& e : graph.edges[v]) {
      if (e.negative && comp[v] == comp[e.to]) {
        throw RuleError(Kind::kUnstratified, e.span,
                        "negation of " + graph.names[v] + " occurs in a recursive cycle through " +
                            graph.names[e.to]);
      }
    }
  }

  // Tarjan numbers components in reverse topological order, so dependencies
  // of a component carry larger ids and are visited first here.
  const int ncomp = n == 0 ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
  std::vector<int> comp_stratum(ncomp, 0);
  for (int c = ncomp - 1; c >= 0; --c) {
    for (int v = 0; v < n; ++v) {
      if (comp[v] != c) continue;
      for (const auto& e : graph.edges[v]) {
        const int target = comp[e.to];
        if (target == c) continue;
        comp_stratum[target] =
            std::max(comp_stratum[target], comp_stratum[c] + (e.negative ? 1 : 0));
      }
    }
  }
  for (int v = 0; v < n; ++v) {
    program.strata[graph.names[v]] = comp_stratum[comp[v]];
  }

  program.clauses = std::move(clauses);
  return program;
}

}  // namespace logicrank
