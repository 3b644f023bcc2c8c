#pragma once

#include <stdexcept>
#include <string>

namespace rotorpair {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Two operands of different so(n) dimensions were combined.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// A non-finite value appeared during evaluation or integration.
/// Carries the last good time when raised inside an integration.
class NumericError : public Error {
public:
    explicit NumericError(const std::string& msg, double t = 0.0)
        : Error(msg), t_(t) {}
    double time() const { return t_; }

private:
    double t_ = 0.0;
};

/// An operation that needs a nonzero invariant (K, amplitude, frequency)
/// was called on the degenerate family.
class DegenerateInvariantError : public Error {
public:
    using Error::Error;
};

/// Preconditions on caller-supplied values were violated.
class InvalidInputError : public Error {
public:
    using Error::Error;
};

/// Autocorrelation search found no significant peak.
class NoPeriodFound : public Error {
public:
    using Error::Error;
};

/// Config file could not be parsed or validated; message carries file:line.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Filesystem read/write failure.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace rotorpair
