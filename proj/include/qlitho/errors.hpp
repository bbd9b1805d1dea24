#pragma once

#include <stdexcept>
#include <string>

namespace qlitho {

/// Base for every error raised by the library. Each subclass names one
/// failure category so callers (and the CLI exit-code mapping) can
/// dispatch on type instead of parsing messages.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (N = 0, m > N/2, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A weighted sum of states cancelled to (numerically) nothing.
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

/// Operation requested on the wrong state form (product vs GHZ).
class WrongForm : public Error {
 public:
  using Error::Error;
};

/// d<X>/dphi vanishes, so error propagation carries no information.
class StationaryPoint : public Error {
 public:
  using Error::Error;
};

/// Requested phase lies outside the monotone arccos inversion window.
class WindowViolation : public Error {
 public:
  using Error::Error;
};

class InsufficientTrials : public Error {
 public:
  using Error::Error;
};

/// The overlap of a state family never falls below the orthogonality threshold.
class NoOrthogonalState : public Error {
 public:
  using Error::Error;
};

/// Malformed input file. `line()` is 1-based, 0 when not applicable.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace qlitho
