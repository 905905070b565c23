#pragma once

#include <stdexcept>
#include <string>

namespace trotter {

/// Bad user input: malformed files, invalid flags, broken invariants in data.
/// Maps to CLI exit code 2.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// A numerical guard tripped (branch ambiguity, dimension cap, iteration
/// cap). The computation is refused rather than silently corrupted.
/// Maps to CLI exit code 3.
class NumericalGuardError : public std::runtime_error {
 public:
  explicit NumericalGuardError(const std::string& what)
      : std::runtime_error(what) {}
};

/// Internal invariant violation. Maps to CLI exit code 4.
class InternalError : public std::logic_error {
 public:
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

/// Parse error carrying a 1-based line number.
class ParseError : public InputError {
 public:
  ParseError(const std::string& what, long line)
      : InputError(what + " (line " + std::to_string(line) + ")"),
        line_(line) {}
  long line() const { return line_; }

 private:
  long line_;
};

}  // namespace trotter
