#pragma once

#include <stdexcept>
#include <string>

namespace ssq {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument: out-of-range index, bad family/size combination, non-unit vector.
class ParameterError : public Error {
public:
  using Error::Error;
};

/// Input violates a representation invariant (not normalized, not symmetric, ...).
class RepresentationError : public Error {
public:
  using Error::Error;
};

/// Request exceeds a configured resource cap (qubit count).
class ResourceError : public Error {
public:
  using Error::Error;
};

/// A linear system that must be regular turned out singular.
class NumericalError : public Error {
public:
  using Error::Error;
};

/// A criterion's own applicability conditions do not hold for the given state/frame.
class PreconditionError : public Error {
public:
  using Error::Error;
};

/// The mean spin vanishes, so the plane orthogonal to it is undefined.
class UndefinedMeanSpinError : public Error {
public:
  using Error::Error;
};

}  // namespace ssq
