#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "tsolve/eqsys.hpp"
#include "tsolve/lattice.hpp"

namespace tsolve {

/*
 * Right-hand-side expressions of finite equation systems:
 *
 *   get v | lit d | join e e | meet e e | inc e | ite (eq|leq e e) e e
 *
 * Nested subexpressions are parenthesized; the outermost one need not be.
 */
struct RhsExpr;
using RhsExprPtr = std::shared_ptr<const RhsExpr>;

struct RhsExpr {
  enum class Op { Get, Lit, Join, Meet, Inc, Ite };
  enum class Cmp { Eq, Leq };

  Op op = Op::Lit;
  std::string var;          // Get
  Value literal;            // Lit
  Cmp cmp = Cmp::Eq;        // Ite
  std::vector<RhsExprPtr> args;  // Join/Meet: 2, Inc: 1, Ite: lhs rhs then else

  static RhsExprPtr get(std::string v);
  static RhsExprPtr lit(Value d);
  static RhsExprPtr join(RhsExprPtr a, RhsExprPtr b);
  static RhsExprPtr meet(RhsExprPtr a, RhsExprPtr b);
  static RhsExprPtr inc(RhsExprPtr a);
  static RhsExprPtr ite(Cmp cmp, RhsExprPtr lhs, RhsExprPtr rhs, RhsExprPtr then_e,
                        RhsExprPtr else_e);
};

bool equal(const RhsExpr& a, const RhsExpr& b);

/// True when the expression uses no `ite`; such right-hand sides are monotone.
bool is_monotone_syntax(const RhsExpr& e);

/// Variables mentioned by `get` nodes, in first-occurrence order.
std::vector<std::string> mentioned_vars(const RhsExpr& e);

/// Parses a DSL expression. Line numbers in errors start at first_line.
RhsExprPtr parse_rhs_expr(std::string_view text, const Lattice& lattice,
                          std::size_t first_line = 1);

std::string print_rhs_expr(const RhsExpr& e, const Lattice& lattice);

/// Tree realization of e: each `get` becomes one query, evaluated left to
/// right.
Tree compile_rhs_dsl(const RhsExprPtr& e, const LatticePtr& lattice);

/// Finite system with one DSL right-hand side per variable.
EquationSystem dsl_system(const LatticePtr& lattice, const std::vector<VarId>& vars,
                          const std::vector<RhsExprPtr>& exprs);

}  // namespace tsolve
