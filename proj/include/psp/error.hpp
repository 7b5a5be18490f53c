#pragma once

#include <stdexcept>
#include <string>

namespace psp {

// Base for everything the library throws on purpose.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Caller supplied something outside the model's domain. The CLI maps these
// to exit code 2.
class ValidationError : public Error {
  public:
    using Error::Error;
};

class ParameterError : public ValidationError {
  public:
    using ValidationError::ValidationError;
};

class EmptyInputError : public ValidationError {
  public:
    using ValidationError::ValidationError;
};

class AchievabilityError : public ValidationError {
  public:
    using ValidationError::ValidationError;
};

class CaseMismatchError : public ValidationError {
  public:
    using ValidationError::ValidationError;
};

class FeasibilityError : public ValidationError {
  public:
    using ValidationError::ValidationError;
};

class UnsupportedStructureError : public ValidationError {
  public:
    using ValidationError::ValidationError;
};

class SizeError : public ValidationError {
  public:
    using ValidationError::ValidationError;
};

class HypothesisError : public ValidationError {
  public:
    using ValidationError::ValidationError;
};

// A produced schedule broke a guaranteed bound. Always an implementation bug.
class BoundViolation : public Error {
  public:
    using Error::Error;
};

class IoError : public Error {
  public:
    using Error::Error;
};

} // namespace psp
