#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace flowsec {

// Base of every error raised by the library. Analysis answers (a flow that
// does not exist, a poset that is not an implementation) are never errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define FLOWSEC_DEFINE_ERROR(Name)              \
  class Name : public Error {                   \
   public:                                      \
    using Error::Error;                         \
  }

FLOWSEC_DEFINE_ERROR(DuplicateEntity);
FLOWSEC_DEFINE_ERROR(UnknownEndpoint);
FLOWSEC_DEFINE_ERROR(UnknownEntity);
FLOWSEC_DEFINE_ERROR(NotAPreorder);
FLOWSEC_DEFINE_ERROR(NotAPartialOrder);
FLOWSEC_DEFINE_ERROR(MissingLabel);
FLOWSEC_DEFINE_ERROR(EntityMismatch);
FLOWSEC_DEFINE_ERROR(UnknownLevel);
FLOWSEC_DEFINE_ERROR(UnknownCategory);
FLOWSEC_DEFINE_ERROR(CyclicLevels);
FLOWSEC_DEFINE_ERROR(UnknownFlowType);
FLOWSEC_DEFINE_ERROR(PartNameClash);

#undef FLOWSEC_DEFINE_ERROR

// Text input errors carry a 1-based position.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class SyntaxError : public ParseError {
 public:
  using ParseError::ParseError;
};

class SemanticError : public ParseError {
 public:
  using ParseError::ParseError;
};

}  // namespace flowsec
