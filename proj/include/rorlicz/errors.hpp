#pragma once

#include <stdexcept>
#include <string>

namespace rorlicz {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside an operation's domain (negative x, lambda <= 0, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Input that violates a type invariant or a documented schema.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Two independent computations of the same quantity disagree.
class NumericalError : public Error {
public:
    using Error::Error;
};

} // namespace rorlicz
