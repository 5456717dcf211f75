#pragma once

#include <stdexcept>
#include <string>

namespace causalkh {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed braid word, PD code, event or batch line.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A configured size limit (crossings, generators) would be exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// An internal consistency check failed (d^2 != 0, grading drift, ...).
class IntegrityError : public Error {
 public:
  using Error::Error;
};

/// The input is not a pair of longitudes in the solid torus.
class HypothesisError : public Error {
 public:
  using Error::Error;
};

/// Identical events, or a near-null pair that never reaches generic position.
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

/// A braid move that does not apply at the requested position.
class InvalidMoveError : public Error {
 public:
  using Error::Error;
};

}  // namespace causalkh
