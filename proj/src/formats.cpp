#include "tsolve/formats.hpp"

#include <cstdint>
#include <optional>
#include <set>

#include "dsl_parse.hpp"
#include "lexer.hpp"

namespace tsolve {

using detail::Token;
using detail::TokenStream;

namespace {

bool is_word(const Token& t, std::string_view w) {
  return t.kind == Token::Kind::Word && t.text == w;
}

LatticeDescriptor parse_descriptor(TokenStream& ts) {
  const Token& kind = ts.expect_word("a lattice kind");
  const std::size_t line = kind.line;
  try {
    if (kind.text == "natinf") return LatticeDescriptor::natinf();
    if (kind.text == "interval") return LatticeDescriptor::interval();
    if (kind.text == "chain") {
      const Token& n = ts.expect_word("the chain size");
      std::uint32_t size = 0;
      try {
        std::size_t used = 0;
        const unsigned long v = std::stoul(n.text, &used);
        if (used != n.text.size() || v > UINT32_MAX) throw std::invalid_argument("size");
        size = static_cast<std::uint32_t>(v);
      } catch (const std::logic_error&) {
        TokenStream::fail(n, "expected a chain size");
      }
      auto d = LatticeDescriptor::chain(size);
      d.validate();
      return d;
    }
    if (kind.text == "powerset") {
      std::vector<std::string> atoms;
      while (ts.peek().kind == Token::Kind::Word && ts.peek().line == line)
        atoms.push_back(ts.next().text);
      auto d = LatticeDescriptor::powerset(std::move(atoms));
      d.validate();
      return d;
    }
  } catch (const UsageError& e) {
    throw ParseError(e.what(), kind.line, kind.col);
  }
  TokenStream::fail(kind, "unknown lattice kind");
}

// Scheme expressions.

class SchemeParser {
 public:
  SchemeParser(TokenStream& ts, Scheme& s, const BuiltinRegistry& reg)
      : m_ts(ts), m_s(s), m_reg(reg) {}

  SchemeExprPtr top() {
    if (m_ts.peek().kind == Token::Kind::LParen) return operand();
    return form();
  }

  // Cell references with their positions, checked once all points are known.
  std::vector<Token> refs;

 private:
  SchemeExprPtr operand() {
    if (is_word(m_ts.peek(), "ctx")) {
      m_ts.next();
      return SchemeExpr::ctx();
    }
    m_ts.expect(Token::Kind::LParen, "'ctx' or '(' opening a subexpression");
    auto e = form();
    m_ts.expect(Token::Kind::RParen, "')' closing a subexpression");
    return e;
  }

  SchemeExprPtr form() {
    const Token head = m_ts.expect_word("an expression");
    if (head.text == "ctx") return SchemeExpr::ctx();
    if (head.text == "lit")
      return SchemeExpr::constant_of(detail::parse_value_token(m_ts.next(), *m_s.lattice));
    if (head.text == "cell") {
      const Token point = m_ts.expect_word("a point name after 'cell'");
      refs.push_back(point);
      return SchemeExpr::cell(point.text, operand());
    }
    if (head.text == "join" || head.text == "meet") {
      use(*m_reg.find(head.text));
      auto a = operand();
      auto b = operand();
      return SchemeExpr::apply(head.text, {a, b});
    }
    if (head.text == "apply") {
      const BuiltinFn fn = builtin();
      std::vector<SchemeExprPtr> args;
      for (std::size_t i = 0; i < fn.arity; ++i) args.push_back(operand());
      return SchemeExpr::apply(fn.name, std::move(args));
    }
    TokenStream::fail(head, "unknown scheme operator '" + head.text + "'");
  }

  BuiltinFn builtin() {
    if (m_ts.peek().kind == Token::Kind::LParen) {
      m_ts.next();
      const Token family = m_ts.expect_word("a builtin family name");
      if (!m_reg.has_family(family.text))
        TokenStream::fail(family, "unknown builtin family '" + family.text + "'");
      const Token param = m_ts.expect_word("a builtin parameter");
      BuiltinFn fn;
      try {
        fn = m_reg.instantiate(family.text, param.text);
      } catch (const Error& e) {
        throw ParseError(e.what(), param.line, param.col);
      }
      m_ts.expect(Token::Kind::RParen, "')' closing the builtin");
      return use(fn);
    }
    const Token name = m_ts.expect_word("a builtin name");
    if (const BuiltinFn* fn = m_reg.find(name.text)) return use(*fn);
    if (m_reg.has_family(name.text))
      TokenStream::fail(name, "builtin '" + name.text + "' needs a parameter, write (" +
                                  name.text + " k)");
    TokenStream::fail(name, "unknown builtin '" + name.text + "'");
  }

  const BuiltinFn& use(const BuiltinFn& fn) {
    return m_s.builtins.insert_or_assign(fn.name, fn).first->second;
  }

  TokenStream& m_ts;
  Scheme& m_s;
  const BuiltinRegistry& m_reg;
};

}  // namespace

bool FiniteFile::monotone_syntax() const {
  for (const auto& e : exprs)
    if (!is_monotone_syntax(*e)) return false;
  return true;
}

FiniteFile parse_finite_file(std::string_view text) {
  TokenStream ts(detail::tokenize(text));
  const Token& kw = ts.peek();
  if (!is_word(kw, "lattice")) TokenStream::fail(kw, "expected 'lattice'");
  ts.next();
  FiniteFile f;
  f.lattice = make_domain(parse_descriptor(ts));

  std::set<std::string> seen;
  std::vector<Token> refs;
  while (!ts.at_end()) {
    const Token& kwv = ts.peek();
    if (!is_word(kwv, "var")) TokenStream::fail(kwv, "expected 'var'");
    ts.next();
    const Token name = ts.expect_word("a variable name");
    if (!seen.insert(name.text).second)
      throw ParseError("duplicate variable '" + name.text + "'", name.line, name.col);
    ts.expect(Token::Kind::Equals, "'='");
    f.vars.emplace_back(name.text);
    f.exprs.push_back(detail::parse_rhs(ts, *f.lattice));
  }
  if (f.vars.empty()) throw ParseError("no variables");
  for (std::size_t i = 0; i < f.exprs.size(); ++i)
    for (const auto& v : mentioned_vars(*f.exprs[i]))
      if (!seen.count(v))
        throw ParseError("variable '" + f.vars[i].name + "' refers to undeclared variable '" +
                         v + "'");
  f.sys = dsl_system(f.lattice, f.vars, f.exprs);
  return f;
}

std::string print_finite_file(const FiniteFile& f) {
  std::string out = "lattice " + f.lattice->descriptor().to_string() + "\n";
  for (std::size_t i = 0; i < f.vars.size(); ++i)
    out += "var " + f.vars[i].name + " = " + print_rhs_expr(*f.exprs[i], *f.lattice) + "\n";
  return out;
}

Scheme parse_scheme_file(std::string_view text) {
  TokenStream ts(detail::tokenize(text));
  const Token& kw = ts.peek();
  if (!is_word(kw, "scheme")) TokenStream::fail(kw, "expected 'scheme'");
  ts.next();
  Scheme s;
  s.lattice = make_domain(parse_descriptor(ts));
  const BuiltinRegistry reg = default_builtins(s.lattice);
  SchemeParser parser(ts, s, reg);

  std::optional<Token> start;
  while (!ts.at_end()) {
    const Token head = ts.next();
    if (is_word(head, "start")) {
      if (start) throw ParseError("duplicate start directive", head.line, head.col);
      start = ts.expect_word("the start point");
      s.start_point = start->text;
      s.start_context = detail::parse_value_token(ts.next(), *s.lattice);
    } else if (is_word(head, "point")) {
      const Token name = ts.expect_word("a point name");
      if (s.rhs.count(name.text))
        throw ParseError("duplicate point '" + name.text + "'", name.line, name.col);
      ts.expect(Token::Kind::Equals, "'='");
      s.points.push_back(name.text);
      s.rhs[name.text] = parser.top();
    } else {
      TokenStream::fail(head, "expected 'start' or 'point'");
    }
  }
  if (s.points.empty()) throw ParseError("no points");
  if (!start) throw ParseError("missing start");
  for (const auto& r : parser.refs)
    if (!s.rhs.count(r.text))
      throw ParseError("unknown point '" + r.text + "'", r.line, r.col);
  if (!s.rhs.count(s.start_point))
    throw ParseError("unknown point '" + s.start_point + "'", start->line, start->col);
  validate(s);
  return s;
}

std::string print_scheme_file(const Scheme& s) {
  std::string out = "scheme " + s.lattice->descriptor().to_string() + "\n";
  out += "start " + s.start_point + " " + s.lattice->print(s.start_context) + "\n";
  for (const auto& p : s.points)
    out += "point " + p + " = " + print_scheme_expr(*s.rhs.at(p), *s.lattice) + "\n";
  return out;
}

FileKind detect_file_kind(std::string_view text) {
  const auto tokens = detail::tokenize(text);
  if (!tokens.empty()) {
    if (is_word(tokens.front(), "lattice")) return FileKind::Finite;
    if (is_word(tokens.front(), "scheme")) return FileKind::Scheme;
  }
  TokenStream ts(tokens);
  TokenStream::fail(ts.peek(), "expected 'lattice' or 'scheme'");
}

}  // namespace tsolve
