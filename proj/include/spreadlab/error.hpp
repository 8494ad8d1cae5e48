#pragma once

#include <stdexcept>
#include <string>

namespace spreadlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter or argument violates a documented precondition.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A numerical procedure failed (NaN, bracketing failure, non-convergence).
class NumericalError : public Error {
public:
    using Error::Error;
};

/// File or directory access failed; the message carries the path.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace spreadlab
