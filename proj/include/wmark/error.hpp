#pragma once

#include <stdexcept>
#include <string>

namespace wmark {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or unreadable file, bad path.
class IoError : public Error {
public:
    using Error::Error;
};

/// Arguments that violate an operation's preconditions.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

}  // namespace wmark
