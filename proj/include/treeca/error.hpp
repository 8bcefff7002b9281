#pragma once

#include <stdexcept>
#include <string>

namespace treeca {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed arguments, files or pattern strings. The CLI maps these to exit code 2.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

class ShapeError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class ParseError : public InvalidInput {
 public:
  ParseError(int line, const std::string& what)
      : InvalidInput(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line), detail_(what) {}
  int line() const noexcept { return line_; }
  /// The message without the line prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  int line_;
  std::string detail_;
};

// A checker was asked to run on a rule outside its domain (e.g. a non-permutive rule
// given to the permutive preimage builder).
class UnsupportedRule : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

// A construction met a state its precondition should have excluded.
class InconsistencyError : public Error {
 public:
  using Error::Error;
};

// A search exhausted its space without producing the requested object.
class NoWitness : public Error {
 public:
  using Error::Error;
};

// The enumeration a request needs is larger than the configured budget. Exit code 3.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace treeca
