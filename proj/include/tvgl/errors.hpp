#pragma once

#include <stdexcept>
#include <string>

namespace tvgl {

/// Base class for all recoverable failures raised by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A matrix that was required to be positive definite is not.
class NotPositiveDefinite : public Error {
public:
    using Error::Error;
};

/// Two operands have incompatible dimensions.
class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// All raw kernel weights vanished: the bandwidth is too small for the grid.
class EmptyWindow : public Error {
public:
    using Error::Error;
};

/// An unpenalized problem was posed with a singular input matrix.
class SingularInput : public Error {
public:
    using Error::Error;
};

/// A diagonal entry required to be strictly positive is not.
class ZeroDiagonal : public Error {
public:
    using Error::Error;
};

/// A closed-form expression was evaluated outside its validity domain.
class OutOfDomain : public Error {
public:
    using Error::Error;
};

/// An operation needed analytic derivatives that were not supplied.
class MissingDerivatives : public Error {
public:
    using Error::Error;
};

/// Invalid configuration value or unknown configuration key.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Filesystem or parsing failure on an input/output artifact.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace tvgl
