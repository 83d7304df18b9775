#pragma once

#include <stdexcept>
#include <string>

namespace pointint {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid input: precondition or type invariant violated.
class ValidationError : public Error {
public:
    using Error::Error;
};

class DeterminantViolation : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Failure of a numerical procedure on otherwise valid input.
class NumericalError : public Error {
public:
    using Error::Error;
};

class SingularInterface : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class DegenerateSpectrum : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class InconsistentSystem : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class BoundaryReached : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class PacketOutsideGrid : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class NonUnitaryBC : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class NTooLarge : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class NotAttractive : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class OnWall : public ValidationError {
public:
    using ValidationError::ValidationError;
};

}  // namespace pointint
