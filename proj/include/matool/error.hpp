#pragma once

#include <stdexcept>
#include <string>

namespace matool {

/// Base for all toolkit failures.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Precondition violated by caller-supplied data.
class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// A root bracket did not straddle a sign change.
class BracketError : public Error {
public:
  BracketError(const std::string& what, double lo_value, double hi_value)
      : Error(what), lo_value(lo_value), hi_value(hi_value) {}
  double lo_value;
  double hi_value;
};

/// No solution could be located within the configured search range.
class NoSolution : public Error {
public:
  using Error::Error;
};

/// An iterative solver or cross-check did not reach its tolerance.
class ConvergenceError : public Error {
public:
  using Error::Error;
};

} // namespace matool
