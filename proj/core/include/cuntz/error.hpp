#pragma once

#include <stdexcept>
#include <string>

namespace cuntz {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input data (shapes, parse failures, non-expansive R).
class InputError : public Error {
public:
    using Error::Error;
};

/// An operation was called outside its documented domain.
class PreconditionError : public Error {
public:
    using Error::Error;
};

} // namespace cuntz
