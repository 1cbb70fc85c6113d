#pragma once

#include <stdexcept>
#include <string>

namespace fraclps {

// Precondition violations on library entry points throw std::invalid_argument.
// The types below carry failures that the command-line front end maps onto
// distinct exit codes.

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid or unknown configuration key.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Malformed input file (CSV field or sample).
class InputError : public Error {
public:
    using Error::Error;
};

/// A quadrature budget cannot certify the requested tolerance.
class AccuracyError : public Error {
public:
    using Error::Error;
};

}  // namespace fraclps
