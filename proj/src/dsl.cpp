#include "tsolve/dsl.hpp"

#include <algorithm>
#include <map>

#include "dsl_parse.hpp"

namespace tsolve {

namespace {

RhsExprPtr make(RhsExpr e) { return std::make_shared<const RhsExpr>(std::move(e)); }

RhsExprPtr binary(RhsExpr::Op op, RhsExprPtr a, RhsExprPtr b) {
  RhsExpr e;
  e.op = op;
  e.args = {std::move(a), std::move(b)};
  return make(std::move(e));
}

}  // namespace

RhsExprPtr RhsExpr::get(std::string v) {
  RhsExpr e;
  e.op = Op::Get;
  e.var = std::move(v);
  return make(std::move(e));
}

RhsExprPtr RhsExpr::lit(Value d) {
  RhsExpr e;
  e.op = Op::Lit;
  e.literal = std::move(d);
  return make(std::move(e));
}

RhsExprPtr RhsExpr::join(RhsExprPtr a, RhsExprPtr b) {
  return binary(Op::Join, std::move(a), std::move(b));
}

RhsExprPtr RhsExpr::meet(RhsExprPtr a, RhsExprPtr b) {
  return binary(Op::Meet, std::move(a), std::move(b));
}

RhsExprPtr RhsExpr::inc(RhsExprPtr a) {
  RhsExpr e;
  e.op = Op::Inc;
  e.args = {std::move(a)};
  return make(std::move(e));
}

RhsExprPtr RhsExpr::ite(Cmp cmp, RhsExprPtr lhs, RhsExprPtr rhs, RhsExprPtr then_e,
                        RhsExprPtr else_e) {
  RhsExpr e;
  e.op = Op::Ite;
  e.cmp = cmp;
  e.args = {std::move(lhs), std::move(rhs), std::move(then_e), std::move(else_e)};
  return make(std::move(e));
}

bool equal(const RhsExpr& a, const RhsExpr& b) {
  if (a.op != b.op || a.args.size() != b.args.size()) return false;
  switch (a.op) {
    case RhsExpr::Op::Get:
      return a.var == b.var;
    case RhsExpr::Op::Lit:
      return a.literal == b.literal;
    case RhsExpr::Op::Ite:
      if (a.cmp != b.cmp) return false;
      break;
    default:
      break;
  }
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!equal(*a.args[i], *b.args[i])) return false;
  return true;
}

bool is_monotone_syntax(const RhsExpr& e) {
  if (e.op == RhsExpr::Op::Ite) return false;
  return std::all_of(e.args.begin(), e.args.end(),
                     [](const RhsExprPtr& a) { return is_monotone_syntax(*a); });
}

std::vector<std::string> mentioned_vars(const RhsExpr& e) {
  std::vector<std::string> out;
  auto walk = [&out](const auto& self, const RhsExpr& x) -> void {
    if (x.op == RhsExpr::Op::Get &&
        std::find(out.begin(), out.end(), x.var) == out.end())
      out.push_back(x.var);
    for (const auto& a : x.args) self(self, *a);
  };
  walk(walk, e);
  return out;
}

namespace detail {

Value parse_value_token(const Token& tok, const Lattice& lattice) {
  if (tok.kind != Token::Kind::Word) TokenStream::fail(tok, "expected a value");
  try {
    return lattice.parse(tok.text);
  } catch (const ParseError& e) {
    throw ParseError(e.what(), tok.line, tok.col);
  }
}

namespace {

RhsExprPtr parse_operand(TokenStream& ts, const Lattice& lattice);

RhsExprPtr parse_form(TokenStream& ts, const Lattice& lattice) {
  const Token& head = ts.expect_word("an expression");
  const std::string& op = head.text;
  if (op == "get") {
    const Token& v = ts.expect_word("a variable name after 'get'");
    return RhsExpr::get(v.text);
  }
  if (op == "lit") return RhsExpr::lit(parse_value_token(ts.next(), lattice));
  if (op == "join" || op == "meet") {
    auto a = parse_operand(ts, lattice);
    auto b = parse_operand(ts, lattice);
    return op == "join" ? RhsExpr::join(a, b) : RhsExpr::meet(a, b);
  }
  if (op == "inc") {
    if (!lattice.has_arithmetic())
      throw ParseError("'inc' is not defined on " + lattice.descriptor().to_string(),
                       head.line, head.col);
    return RhsExpr::inc(parse_operand(ts, lattice));
  }
  if (op == "ite") {
    ts.expect(Token::Kind::LParen, "'(' opening the comparison of 'ite'");
    const Token& c = ts.expect_word("'eq' or 'leq'");
    RhsExpr::Cmp cmp;
    if (c.text == "eq")
      cmp = RhsExpr::Cmp::Eq;
    else if (c.text == "leq")
      cmp = RhsExpr::Cmp::Leq;
    else
      TokenStream::fail(c, "expected 'eq' or 'leq'");
    auto lhs = parse_operand(ts, lattice);
    auto rhs = parse_operand(ts, lattice);
    ts.expect(Token::Kind::RParen, "')' closing the comparison");
    auto then_e = parse_operand(ts, lattice);
    auto else_e = parse_operand(ts, lattice);
    return RhsExpr::ite(cmp, lhs, rhs, then_e, else_e);
  }
  TokenStream::fail(head, "unknown operator '" + op + "'");
}

RhsExprPtr parse_operand(TokenStream& ts, const Lattice& lattice) {
  ts.expect(Token::Kind::LParen, "'(' opening a subexpression");
  auto e = parse_form(ts, lattice);
  ts.expect(Token::Kind::RParen, "')' closing a subexpression");
  return e;
}

}  // namespace

RhsExprPtr parse_rhs(TokenStream& ts, const Lattice& lattice) {
  if (ts.peek().kind == Token::Kind::LParen) return parse_operand(ts, lattice);
  return parse_form(ts, lattice);
}

}  // namespace detail

RhsExprPtr parse_rhs_expr(std::string_view text, const Lattice& lattice,
                          std::size_t first_line) {
  detail::TokenStream ts(detail::tokenize(text, first_line));
  auto e = detail::parse_rhs(ts, lattice);
  if (!ts.at_end()) detail::TokenStream::fail(ts.peek(), "unexpected trailing input");
  return e;
}

std::string print_rhs_expr(const RhsExpr& e, const Lattice& lattice) {
  auto sub = [&](const RhsExprPtr& a) { return "(" + print_rhs_expr(*a, lattice) + ")"; };
  switch (e.op) {
    case RhsExpr::Op::Get: return "get " + e.var;
    case RhsExpr::Op::Lit: return "lit " + lattice.print(e.literal);
    case RhsExpr::Op::Join: return "join " + sub(e.args[0]) + " " + sub(e.args[1]);
    case RhsExpr::Op::Meet: return "meet " + sub(e.args[0]) + " " + sub(e.args[1]);
    case RhsExpr::Op::Inc: return "inc " + sub(e.args[0]);
    case RhsExpr::Op::Ite:
      return std::string("ite (") + (e.cmp == RhsExpr::Cmp::Eq ? "eq " : "leq ") +
             sub(e.args[0]) + " " + sub(e.args[1]) + ") " + sub(e.args[2]) + " " +
             sub(e.args[3]);
  }
  return {};
}

namespace {

Tree compile(const RhsExprPtr& e, const LatticePtr& lat, const Continuation& k) {
  switch (e->op) {
    case RhsExpr::Op::Get:
      return Tree::query(VarId(e->var), k);
    case RhsExpr::Op::Lit:
      return k(e->literal);
    case RhsExpr::Op::Join:
    case RhsExpr::Op::Meet: {
      const bool is_join = e->op == RhsExpr::Op::Join;
      return compile(e->args[0], lat, [=](const Value& a) {
        return compile(e->args[1], lat, [=](const Value& b) {
          return k(is_join ? lat->join(a, b) : lat->meet(a, b));
        });
      });
    }
    case RhsExpr::Op::Inc:
      return compile(e->args[0], lat, [=](const Value& a) { return k(lat->inc(a)); });
    case RhsExpr::Op::Ite:
      return compile(e->args[0], lat, [=](const Value& a) {
        return compile(e->args[1], lat, [=](const Value& b) {
          const bool holds = e->cmp == RhsExpr::Cmp::Eq ? lat->eq(a, b) : lat->leq(a, b);
          return compile(holds ? e->args[2] : e->args[3], lat, k);
        });
      });
  }
  return k(lat->bot());
}

}  // namespace

Tree compile_rhs_dsl(const RhsExprPtr& e, const LatticePtr& lattice) {
  return compile(e, lattice, [](const Value& v) { return Tree::answer(v); });
}

EquationSystem dsl_system(const LatticePtr& lattice, const std::vector<VarId>& vars,
                          const std::vector<RhsExprPtr>& exprs) {
  if (vars.size() != exprs.size()) throw UsageError("one expression per variable expected");
  auto table = std::make_shared<std::map<VarId, RhsExprPtr>>();
  for (std::size_t i = 0; i < vars.size(); ++i) table->emplace(vars[i], exprs[i]);
  EquationSystem sys;
  sys.lattice = lattice;
  sys.all_vars = vars;
  sys.rhs = [table, lattice](const VarId& v) {
    auto it = table->find(v);
    if (it == table->end())
      throw UnknownVariable("undefined variable " + to_string(v, *lattice));
    return compile_rhs_dsl(it->second, lattice);
  };
  return sys;
}

}  // namespace tsolve
