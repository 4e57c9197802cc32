#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace twistforge {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DivisionByZero : public Error {
 public:
  DivisionByZero() : Error("division by zero") {}
  explicit DivisionByZero(const std::string& what) : Error(what) {}
};

/// An argument lies outside the domain of an operation (bad conductor, unit not coprime, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A structural check on mathematical input failed.
class VerificationError : public Error {
 public:
  using Error::Error;
};

/// A search exceeded its configured node budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// The embedding problem is not of Kummer shape.
class OutsideFamily : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t line, std::size_t column)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Counts elementary steps (multiplication-table lookups) of a combinatorial search.
class Budget {
 public:
  explicit Budget(std::size_t limit = 10'000'000) : limit_(limit) {}

  void charge(std::size_t n = 1) {
    used_ += n;
    if (used_ > limit_) {
      throw BudgetExceeded("node budget of " + std::to_string(limit_) + " exhausted");
    }
  }

  std::size_t used() const noexcept { return used_; }
  std::size_t limit() const noexcept { return limit_; }

 private:
  std::size_t limit_;
  std::size_t used_ = 0;
};

}  // namespace twistforge
