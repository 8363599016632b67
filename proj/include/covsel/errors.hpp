#pragma once

#include <stdexcept>
#include <string>

namespace covsel {

/// Base class for every error the library raises.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input text: matrix CSV, change specs, diffs, line maps,
/// LCOV records, or serialized reports.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Structurally valid input that violates a contract: unknown labels,
/// overlapping change sets, partitions that do not match their suite.
class SemanticError : public Error {
 public:
  using Error::Error;
};

/// A computed value diverged from an embedded golden fixture.
class GoldenMismatchError : public Error {
 public:
  using Error::Error;
};

}  // namespace covsel
