#pragma once

#include <stdexcept>
#include <string>

namespace momentkit {

// Base of every error raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain (illegal order, bad parameter).
struct DomainError : Error {
    using Error::Error;
};

// Kernel evaluated at a point where it is unbounded.
struct SingularityError : Error {
    using Error::Error;
};

// Operation not defined for the requested family or scheme.
struct UnsupportedError : Error {
    using Error::Error;
};

// Malformed or unreadable input data (files, configs).
struct DataError : Error {
    using Error::Error;
};

}  // namespace momentkit
