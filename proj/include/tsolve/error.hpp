#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tsolve {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Misuse of the API, e.g. comparing values of two different lattices.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Malformed textual input. Line and column are 1-based; 0 means unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t line = 0, std::size_t col = 0)
      : Error(format(msg, line, col)), m_line(line), m_col(col) {}

  std::size_t line() const { return m_line; }
  std::size_t column() const { return m_col; }

 private:
  static std::string format(const std::string& msg, std::size_t line,
                            std::size_t col) {
    if (line == 0) return msg;
    std::string where = "line " + std::to_string(line);
    if (col != 0) where += ", column " + std::to_string(col);
    return where + ": " + msg;
  }

  std::size_t m_line;
  std::size_t m_col;
};

/// A right-hand side queried a variable the system does not define.
class UnknownVariable : public Error {
 public:
  using Error::Error;
};

/// A local solver encountered more variables than its budget allows.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// A brute-force oracle computation would exceed its enumeration budget.
class OracleBudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// Kleene iteration did not stabilize within its theoretical bound.
class NonConvergence : public Error {
 public:
  using Error::Error;
};

}  // namespace tsolve
