#pragma once

#include <stdexcept>
#include <string>

namespace sponge {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text. line/column are 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, int line = 0, int column = 0)
      : Error(msg), line_(line), column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_, column_;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Argument outside an operation's domain (bad index, delta >= 1, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Enumeration refused: the estimated (or observed) cube count exceeds the budget.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& msg, double bound) : Error(msg), bound_(bound) {}
  double count_bound() const { return bound_; }

 private:
  double bound_;
};

}  // namespace sponge
