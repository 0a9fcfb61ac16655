#pragma once

#include <stdexcept>
#include <string>

namespace eghspdc {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid user input: geometry, configuration, malformed files. Exit code 2.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A numerical procedure could not deliver a trustworthy result. Exit code 3.
class NumericalError : public Error {
public:
    using Error::Error;
};

class QuadratureError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Sampled field does not decay inside the sampling window.
class DomainError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class InsufficientPowerError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Requested transverse frequency exceeds the on-shell modulus.
class EvanescentError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class ConvergenceError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace eghspdc
