#pragma once

#include <stdexcept>
#include <string>

namespace grovetree {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input violates a documented precondition (bad tree, bad spec, bad argument).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A fixed-width integer result would not fit.
class OverflowError : public Error {
public:
    using Error::Error;
};

/// A configured size or step cap was exceeded.
class ResourceLimit : public Error {
public:
    using Error::Error;
};

/// An iterative numerical routine failed to converge or a solve was singular.
class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace grovetree
