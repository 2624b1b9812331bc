#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace octseg {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid argument or malformed input data.
class InputError : public Error {
public:
    using Error::Error;
};

/// Zero-length tangent or zero total length in a contour.
class GeometryError : public Error {
public:
    GeometryError(const std::string& what, std::size_t index)
        : Error(what), index_(index) {}
    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

/// Contour that is not a function of x (duplicate columns).
class NonFunctionalContourError : public Error {
public:
    using Error::Error;
};

class EmptyRegionError : public Error {
public:
    using Error::Error;
};

class SizeError : public Error {
public:
    using Error::Error;
};

class NumericalError : public Error {
public:
    using Error::Error;
};

/// Shapes or covariances without variance.
class DegeneracyError : public Error {
public:
    using Error::Error;
};

class InsufficientDataError : public Error {
public:
    using Error::Error;
};

class PlacementError : public Error {
public:
    using Error::Error;
};

/// Phantom specification that violates its invariants.
class SpecError : public Error {
public:
    using Error::Error;
};

/// Inconsistent files or documents (CLI level).
class ValidationError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// Output path that cannot be created or replaced.
class WriteError : public IoError {
public:
    using IoError::IoError;
};

}  // namespace octseg
