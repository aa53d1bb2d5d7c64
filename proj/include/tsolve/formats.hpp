#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "tsolve/dsl.hpp"
#include "tsolve/interproc.hpp"

namespace tsolve {

/*
 * Finite system files:
 *
 *   lattice chain 4        # or natinf | interval | powerset a b c
 *   var y1 = ite (eq (get y1) (lit 0)) (lit 1) (lit 0)
 *
 * Scheme files:
 *
 *   scheme natinf
 *   start u 0
 *   point u = join (cell v (cell v (cell u ctx))) ctx
 *   point v = join (apply (meet_const 10) (apply inc (cell v ctx))) ctx
 *
 * Lattice parameters end with their line; everything else is free-form.
 */

struct FiniteFile {
  LatticePtr lattice;
  std::vector<VarId> vars;  // declaration order
  std::vector<RhsExprPtr> exprs;
  EquationSystem sys;

  bool monotone_syntax() const;
};

FiniteFile parse_finite_file(std::string_view text);
std::string print_finite_file(const FiniteFile& f);

Scheme parse_scheme_file(std::string_view text);
std::string print_scheme_file(const Scheme& s);

enum class FileKind { Finite, Scheme };

/// Decided by the first keyword; throws ParseError for anything else.
FileKind detect_file_kind(std::string_view text);

}  // namespace tsolve
