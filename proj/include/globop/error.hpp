#pragma once

#include <stdexcept>
#include <string>

namespace globop {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Two objects were expected to live over the same base (or carrier) but do not.
class BaseMismatch : public Error {
public:
    using Error::Error;
};

/// A map failed to respect arities / fibers / boundaries.
class ArityError : public Error {
public:
    using Error::Error;
};

/// A request exceeded the configured dimension or size bounds.
class BoundsError : public Error {
public:
    using Error::Error;
};

/// Boundary data of a labeled or nested diagram does not glue.
class IncompatibleBoundary : public Error {
public:
    using Error::Error;
};

/// A composition table has no entry for a configuration that needs one.
class MissingEntry : public Error {
public:
    using Error::Error;
};

} // namespace globop
