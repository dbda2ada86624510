#pragma once

#include <stdexcept>
#include <string>

namespace pemix {

/// Base for every error raised by the library. The category drives the CLI exit code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed arguments: non-finite values, bad parameters, mismatched ranges.
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// The data exist and are well formed but are too short for the requested computation.
class InsufficientData : public Error {
public:
    using Error::Error;
};

/// File could not be read or written, or its contents could not be parsed.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace pemix
