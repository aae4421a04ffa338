#pragma once

#include <stdexcept>
#include <string>

namespace satmdp {

// Malformed DIMACS input. `line` is 1-based; 0 when the problem is not tied
// to a specific line (e.g. clause count mismatch at EOF).
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

// Argument outside an operation's documented domain.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The request is well-formed but exceeds a configured resource limit
// (exhaustive-enumeration size, node budget, sample budget).
class RefusalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// API misuse such as acting on a terminal state.
class UsageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Something that the construction guarantees cannot happen did happen.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace satmdp
