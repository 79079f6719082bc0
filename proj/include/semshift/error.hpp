#pragma once

#include <stdexcept>
#include <string>

namespace semshift {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A term or key was requested that the container does not hold.
struct LookupError : Error {
    using Error::Error;
};

// Degenerate numeric input: zero vector, zero variance, histogram mismatch.
struct NumericError : Error {
    using Error::Error;
};

// Unreadable, unwritable, or malformed files.
struct IoError : Error {
    using Error::Error;
};

// Invalid run configuration (bad key, overlapping periods, ...).
struct ConfigError : Error {
    using Error::Error;
};

// A pipeline stage was started before its upstream artifacts exist.
struct MissingInputError : Error {
    explicit MissingInputError(const std::string& path)
        : Error("missing upstream artifact: " + path), path(path) {}
    std::string path;
};

}  // namespace semshift
