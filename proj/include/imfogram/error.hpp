#pragma once

#include <stdexcept>
#include <string>

namespace imfogram {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input rejected by a precondition check (non-finite samples, bad sizes, ...).
class InvalidInput : public Error {
public:
    using Error::Error;
};

// Argument outside the domain an operation is defined on (off-grid times,
// a filter wider than the signal, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// Operation not available for the given data, e.g. multiplier traces of a
// decomposition that was not produced by this library.
class UnsupportedOperation : public Error {
public:
    using Error::Error;
};

} // namespace imfogram
