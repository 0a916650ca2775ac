#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace teamcount {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed DSL / DIMACS / structure text. `offset` is a byte offset into the
/// input (or a line number for line-oriented formats, see `line`).
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& what, std::size_t offset, std::size_t line = 0)
      : Error(what + " at offset " + std::to_string(offset)),
        offset_(offset),
        line_(line) {}
  std::size_t offset() const noexcept { return offset_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t offset_;
  std::size_t line_;
};

class ArityError : public Error {
 public:
  using Error::Error;
};

/// A formula or structure does not satisfy the precondition of an operation
/// (wrong fragment, wrong normal form, class flag violated, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class UnboundVariableError : public Error {
 public:
  using Error::Error;
};

/// Enumeration would exceed the configured step budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// An oracle returned a value that the calling reduction proves impossible.
class OracleFault : public Error {
 public:
  using Error::Error;
};

}  // namespace teamcount
