#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "tsolve/eqsys.hpp"
#include "tsolve/lattice.hpp"

namespace tsolve {

/*
 * Interprocedural equation schemes. Each program point u has one schematic
 * right-hand side e_u over the grammar
 *
 *   e ::= d | ctx | g(e, ..., e) | <u', e>
 *
 * where ctx is the current calling context and <u', e> reads the variable of
 * point u' in the context computed by e. Instantiating a scheme yields an
 * equation system over (point, context) variables that is materialized only
 * as far as a solver explores it.
 */

struct SchemeExpr;
using SchemeExprPtr = std::shared_ptr<const SchemeExpr>;

struct SchemeExpr {
  enum class Kind { Const, Ctx, Apply, Cell };

  Kind kind = Kind::Ctx;
  Value constant;                   // Const
  std::string name;                 // Apply: builtin name, Cell: point
  std::vector<SchemeExprPtr> args;  // Apply: arguments, Cell: the context

  static SchemeExprPtr constant_of(Value d);
  static SchemeExprPtr ctx();
  static SchemeExprPtr apply(std::string fn, std::vector<SchemeExprPtr> args);
  static SchemeExprPtr cell(std::string point, SchemeExprPtr arg);
};

bool equal(const SchemeExpr& a, const SchemeExpr& b);

struct BuiltinFn {
  std::string name;
  std::size_t arity = 0;
  std::function<Value(std::span<const Value>)> eval;
};

/**
 * Builtin functions available to schemes over one lattice. Plain builtins
 * are looked up by name; parameterized families (add_const k, meet_const c,
 * join_const c) are instantiated from their textual parameter, producing a
 * builtin named "family param".
 */
class BuiltinRegistry {
 public:
  using Family = std::function<BuiltinFn(const std::string& param)>;

  explicit BuiltinRegistry(LatticePtr lattice);

  void add(BuiltinFn fn);
  void add_family(const std::string& name, Family make);

  const BuiltinFn* find(const std::string& name) const;
  bool has_family(const std::string& name) const;
  /// Throws ParseError when the parameter is invalid.
  BuiltinFn instantiate(const std::string& family, const std::string& param) const;

 private:
  LatticePtr m_lattice;
  std::map<std::string, BuiltinFn> m_fns;
  std::map<std::string, Family> m_families;
};

/// id, join, meet, join_const c, meet_const c, plus inc, dec and add_const k
/// on lattices with arithmetic.
BuiltinRegistry default_builtins(const LatticePtr& lattice);

struct Scheme {
  LatticePtr lattice;
  std::vector<std::string> points;  // declaration order
  std::map<std::string, SchemeExprPtr> rhs;
  std::map<std::string, BuiltinFn> builtins;
  std::string start_point;
  Value start_context;

  VarId start() const { return VarId(start_point, start_context); }
};

/// Checks the Scheme invariants, throwing UsageError on the first violation.
void validate(const Scheme& s);

using ContextLookup = std::function<Value(const VarId&)>;

/// Value of e in calling context a, reading cells through lookup.
Value sem_expr(const SchemeExpr& e, const Value& a, const ContextLookup& lookup,
               const Scheme& s);

/// Lazily instantiated equation system over (point, context) variables.
EquationSystem instantiate_system(const Scheme& s);

/// Every (point, context) variable; finite lattices only.
std::vector<VarId> enumerate_variables(const Scheme& s);

using Levels = std::map<std::string, std::uint32_t>;

/// A cycle u0 -> u1 -> ... -> u0 whose first edge passes a non-ctx argument.
struct StratificationCycle {
  std::vector<std::string> points;
};

std::variant<Levels, StratificationCycle> check_stratified(const Scheme& s);

/// Independent check of the level conditions for every cell of every rhs.
bool levels_valid(const Scheme& s, const Levels& levels);

std::string print_scheme_expr(const SchemeExpr& e, const Lattice& lattice);

}  // namespace tsolve
