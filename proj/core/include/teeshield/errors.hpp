#pragma once

#include <stdexcept>
#include <string>

namespace teeshield {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Bad inputs: shape mismatches, malformed files, inconsistent artifacts.
// Maps to CLI exit code 2.
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& what) : Error(what) {}
};

// Numeric failure: diverged training, singular obfuscation draws.
// Maps to CLI exit code 4.
class NumericError : public Error {
public:
    explicit NumericError(const std::string& what, long epoch = -1)
        : Error(what), epoch(epoch) {}

    // Epoch index at which training diverged, -1 when not applicable.
    long epoch;
};

}  // namespace teeshield
