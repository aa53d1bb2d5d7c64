#include "lexer.hpp"

#include <cctype>

namespace tsolve::detail {

std::vector<Token> tokenize(std::string_view text, std::size_t first_line) {
  std::vector<Token> out;
  std::size_t line = first_line;
  std::size_t col = 1;
  std::size_t i = 0;

  auto advance = [&] {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++i;
  };

  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance();
      continue;
    }
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance();
      continue;
    }
    Token tok;
    tok.line = line;
    tok.col = col;
    if (c == '(' || c == ')' || c == '=') {
      tok.kind = c == '(' ? Token::Kind::LParen
                          : (c == ')' ? Token::Kind::RParen : Token::Kind::Equals);
      tok.text = std::string(1, c);
      advance();
      out.push_back(std::move(tok));
      continue;
    }
    tok.kind = Token::Kind::Word;
    if (c == '{' || c == '[') {
      const char close = c == '{' ? '}' : ']';
      while (i < text.size() && text[i] != close) {
        if (text[i] == '\n' || text[i] == '#')
          throw ParseError(std::string("unterminated '") + c + "'", tok.line, tok.col);
        if (!std::isspace(static_cast<unsigned char>(text[i]))) tok.text += text[i];
        advance();
      }
      if (i == text.size())
        throw ParseError(std::string("unterminated '") + c + "'", tok.line, tok.col);
      tok.text += close;
      advance();
    } else {
      while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) &&
             text[i] != '(' && text[i] != ')' && text[i] != '#' && text[i] != '=') {
        tok.text += text[i];
        advance();
      }
    }
    out.push_back(std::move(tok));
  }
  Token end;
  end.line = line;
  end.col = col;
  out.push_back(end);
  return out;
}

}  // namespace tsolve::detail
