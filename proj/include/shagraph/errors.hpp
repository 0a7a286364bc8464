#pragma once

#include <stdexcept>
#include <string>

namespace shagraph {

/// Base class for all errors raised by this library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: bad descriptor, broken invariant of user-supplied data,
/// or an operation precondition that the input fails to meet.
class schema_error : public error {
public:
    using error::error;
};

/// Structural mismatch between objects (domain/codomain, graph/system, parents).
class mismatch_error : public error {
public:
    using error::error;
};

/// A configured size bound was exceeded (e.g. group order).
class limit_error : public error {
public:
    using error::error;
};

/// A post-hoc internal verification failed.  Never silent.
class verification_error : public error {
public:
    using error::error;
};

} // namespace shagraph
