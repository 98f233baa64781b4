#pragma once

#include <stdexcept>
#include <string>

namespace aqicert {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad argument or index supplied by the caller.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Input lies outside the regime where an operation is defined (e.g. a support
/// wider than half the girth, or a degree-2 family). Not a certification failure.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// The generator could not meet a girth target within its retry budget, or the
/// target is ruled out by the Moore bound.
class GenerationFailure : public Error {
 public:
  using Error::Error;
};

/// No block index satisfies the threshold condition for the requested support
/// bound; the family must be extended.
class NoSuchIndex : public Error {
 public:
  using Error::Error;
};

/// A guaranteed identity or bound was violated. Always a bug or corrupted input.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace aqicert
