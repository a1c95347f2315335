#pragma once

#include <stdexcept>
#include <string>

namespace patqubo {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input violates a documented precondition (dimension mismatch, bad index, ...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// An exhaustive procedure was asked to enumerate more than its configured cap.
class InfeasibleEnumeration : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

/// Clause with a length other than three.
class UnsupportedClause : public Error {
 public:
  using Error::Error;
};

/// Clause that repeats a variable.
class InvalidClause : public Error {
 public:
  using Error::Error;
};

/// Missing or invalid data files, libraries or datasets.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace patqubo
