#pragma once

// Tokenizer shared by the rhs DSL, the scheme expression language and the
// file formats. Not part of the public interface.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "tsolve/error.hpp"

namespace tsolve::detail {

struct Token {
  enum class Kind { LParen, RParen, Equals, Word, End };
  Kind kind = Kind::End;
  std::string text;
  std::size_t line = 0;
  std::size_t col = 0;
};

/// Splits text into tokens. `{...}` and `[...]` form single word tokens with
/// interior whitespace removed; `#` starts a comment running to end of line.
std::vector<Token> tokenize(std::string_view text, std::size_t first_line = 1);

class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> tokens) : m_tokens(std::move(tokens)) {
    if (m_tokens.empty() || m_tokens.back().kind != Token::Kind::End)
      m_tokens.push_back(Token{});
  }

  const Token& peek() const { return m_tokens[m_pos]; }
  const Token& next() {
    const Token& t = m_tokens[m_pos];
    if (m_pos + 1 < m_tokens.size()) ++m_pos;
    return t;
  }
  bool at_end() const { return peek().kind == Token::Kind::End; }

  const Token& expect(Token::Kind kind, const char* what) {
    if (peek().kind != kind) fail(peek(), std::string("expected ") + what);
    return next();
  }
  const Token& expect_word(const char* what) { return expect(Token::Kind::Word, what); }

  [[noreturn]] static void fail(const Token& at, const std::string& msg) {
    throw ParseError(msg + (at.kind == Token::Kind::End ? " at end of input"
                                                        : ", found '" + at.text + "'"),
                     at.line, at.col);
  }

 private:
  std::vector<Token> m_tokens;
  std::size_t m_pos = 0;
};

}  // namespace tsolve::detail
