#pragma once

#include <stdexcept>
#include <string>

namespace mmuplink {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
public:
    using Error::Error;
};

/// Path loss requested below the reference distance with clamping disabled.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Sequential rejection placement ran out of attempts.
class PlacementInfeasible : public Error {
public:
    using Error::Error;
};

/// A bearing was requested between two coincident points.
class UndefinedAngle : public Error {
public:
    using Error::Error;
};

class InvalidReference : public Error {
public:
    using Error::Error;
};

class NumericalFailure : public Error {
public:
    using Error::Error;
};

/// An internal consistency condition failed (e.g. q > 1 after capacity enforcement).
class InvariantViolation : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace mmuplink
