#pragma once

#include <stdexcept>
#include <string>

namespace loopgerbe {

/// Base class of all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A point or path left the domain (chart box) a form is defined on.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Inconsistent or missing combinatorial data (covers, cochains, degrees).
class StructuralError : public Error {
public:
    using Error::Error;
};

/// No admissible loop / loop-space chart could be found.
class ChartError : public Error {
public:
    using Error::Error;
};

/// An integer-valued quantity was not close enough to an integer.
class IntegralityError : public Error {
public:
    using Error::Error;
};

} // namespace loopgerbe
