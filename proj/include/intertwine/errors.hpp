#pragma once

#include <stdexcept>
#include <string>

namespace intertwine {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define INTERTWINE_ERROR(Name)          \
  class Name : public Error {           \
   public:                              \
    using Error::Error;                 \
  };

INTERTWINE_ERROR(PurityViolation)
INTERTWINE_ERROR(BudgetExhausted)
INTERTWINE_ERROR(RequiresFiniteSystem)
INTERTWINE_ERROR(RequiresStaticDeps)
INTERTWINE_ERROR(RequiresValidWto)
INTERTWINE_ERROR(InvalidConfig)
INTERTWINE_ERROR(DomainMismatch)
INTERTWINE_ERROR(EvalError)
INTERTWINE_ERROR(UnsupportedSideEffect)
INTERTWINE_ERROR(UnsupportedExpression)
INTERTWINE_ERROR(UndeclaredVariable)
INTERTWINE_ERROR(DuplicateMain)
INTERTWINE_ERROR(HasGlobals)
INTERTWINE_ERROR(RecursionUnsupported)

#undef INTERTWINE_ERROR

/// Parse failure with a 1-based source position.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& msg, int line, int column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace intertwine
