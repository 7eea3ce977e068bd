#pragma once

#include <stdexcept>
#include <string>

namespace gpfluct {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A size or feasibility limit was exceeded (partition size, vertex count, n^p).
class BoundError : public Error {
 public:
  using Error::Error;
};

/// Arguments have inconsistent shapes (ragged rows, size mismatches).
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// An index lies outside its admissible range.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// User-supplied data violates a structural requirement (metric axioms, densities).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A numerical routine failed to reach its tolerance.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// A value is outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file or text.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace gpfluct
