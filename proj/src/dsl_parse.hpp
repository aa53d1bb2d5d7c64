#pragma once

#include "lexer.hpp"
#include "tsolve/dsl.hpp"

namespace tsolve::detail {

/// Parses one rhs expression from the stream (top-level parentheses optional).
RhsExprPtr parse_rhs(TokenStream& ts, const Lattice& lattice);

/// Parses a value literal token for the given lattice, reporting its position.
Value parse_value_token(const Token& tok, const Lattice& lattice);

}  // namespace tsolve::detail
