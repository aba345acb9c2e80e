#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mlstrat {

/// Bad user input: malformed files, invalid arguments, unreadable paths.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A text format could not be parsed. Carries the 1-based line number.
class ParseError : public InputError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : InputError("line " + std::to_string(line) + ": " + what), line_(line) {}

  /// Same error, with the message prefixed by its source (usually a path).
  ParseError(const std::string& source, const ParseError& inner)
      : InputError(source + ": " + inner.what()), line_(inner.line()) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A structural invariant does not hold (e.g. folds that are not a partition).
class InvariantError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mlstrat
