#pragma once

#include <compare>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "tsolve/lattice.hpp"

namespace tsolve {

/// Abstract variable: a symbolic name, optionally paired with a calling
/// context (interprocedural systems).
struct VarId {
  std::string name;
  std::optional<Value> context;

  VarId() = default;
  explicit VarId(std::string n) : name(std::move(n)) {}
  VarId(std::string n, Value ctx) : name(std::move(n)), context(std::move(ctx)) {}

  auto operator<=>(const VarId&) const = default;
  bool operator==(const VarId&) const = default;
};

/// `name` or `name:context` when the lattice is known.
std::string to_string(const VarId& v, const Lattice& lattice);

using VarSet = std::set<VarId>;
using Lookup = std::function<Value(const VarId&)>;

class Tree;
using Continuation = std::function<Tree(const Value&)>;

/*
 * Computation tree of a pure right-hand side: either an answer, or a query of
 * one variable whose value selects the remaining computation. Continuations
 * are evaluated on demand, so trees over infinite lattices stay finite in
 * memory.
 */
class Tree {
 public:
  struct Query {
    VarId var;
    Continuation cont;
  };

  static Tree answer(Value v) { return Tree(std::move(v)); }
  static Tree query(VarId var, Continuation cont) {
    return Tree(Query{std::move(var), std::move(cont)});
  }

  bool is_answer() const { return std::holds_alternative<Value>(m_node); }
  const Value& value() const { return std::get<Value>(m_node); }
  const Query& as_query() const { return std::get<Query>(m_node); }

 private:
  explicit Tree(Value v) : m_node(std::move(v)) {}
  explicit Tree(Query q) : m_node(std::move(q)) {}

  std::variant<Value, Query> m_node;
};

/// Follows the queries of t, reading variables through lookup.
Value eval_tree(const Tree& t, const Lookup& lookup);

/// Variables queried while evaluating t under lookup.
VarSet tree_dep(const Tree& t, const Lookup& lookup);

/// Partial assignment; its domain is exactly the set of bound variables.
class Assignment {
 public:
  explicit Assignment(LatticePtr lattice) : m_lattice(std::move(lattice)) {}

  const LatticePtr& lattice() const { return m_lattice; }
  bool contains(const VarId& v) const { return m_values.count(v) != 0; }
  const Value& at(const VarId& v) const;
  void set(const VarId& v, Value value);
  std::size_t size() const { return m_values.size(); }
  bool empty() const { return m_values.empty(); }
  VarSet domain() const;

  const std::map<VarId, Value>& values() const { return m_values; }
  auto begin() const { return m_values.begin(); }
  auto end() const { return m_values.end(); }

  bool operator==(const Assignment& o) const { return m_values == o.m_values; }

 private:
  LatticePtr m_lattice;
  std::map<VarId, Value> m_values;
};

/// Total lookup returning a's value on its domain and top elsewhere.
Lookup extend_top(const Assignment& a);

/// Lookup over a (possibly partial) assignment that throws UnknownVariable
/// outside its domain.
Lookup strict_lookup(const Assignment& a);

struct EquationSystem {
  LatticePtr lattice;
  /// Right-hand side per variable; throws UnknownVariable for undefined ones.
  std::function<Tree(const VarId&)> rhs;
  /// Present for explicitly finite systems.
  std::optional<std::vector<VarId>> all_vars;
};

/// True iff every domain variable's dependencies under the top-extension of a
/// stay inside the domain.
bool is_closed(const Assignment& a, const EquationSystem& sys);

}  // namespace tsolve
