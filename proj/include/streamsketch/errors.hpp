#pragma once

#include <stdexcept>
#include <string>

namespace streamsketch {

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid constructor or operation argument (out of range, overflow, duplicate id, ...).
struct ParameterError : Error {
    using Error::Error;
};

/// Mathematical domain violation (zero vector where an angle is required, d > lambda, ...).
struct DomainError : Error {
    using Error::Error;
};

/// Dimension mismatch between a structure and a supplied point.
struct ShapeError : Error {
    using Error::Error;
};

/// Timestamp moved backwards where a non-decreasing clock is required.
struct OrderingError : Error {
    using Error::Error;
};

/// An id that must be unique was inserted twice.
struct DuplicateError : Error {
    using Error::Error;
};

/// Malformed input file; the message carries a byte offset or line number.
struct FormatError : Error {
    using Error::Error;
};

/// Unusable benchmark configuration.
struct ConfigError : Error {
    using Error::Error;
};

} // namespace streamsketch
