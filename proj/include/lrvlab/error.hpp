#ifndef LRVLAB_ERROR_HPP
#define LRVLAB_ERROR_HPP

#include <stdexcept>
#include <string>

namespace lrvlab {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// The series is too short for the requested configuration.
class InsufficientDataError : public Error {
public:
    using Error::Error;
};

/// Mutually inconsistent or unsupported configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A numerical procedure failed (non-convergence, degenerate estimate).
class NumericError : public Error {
public:
    using Error::Error;
};

} // namespace lrvlab

#endif
