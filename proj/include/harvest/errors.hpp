#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace harvest {

/// Base class for everything this library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// --- configuration errors (CLI exit code 1) ---

class ConfigError : public Error {
public:
    using Error::Error;
};

class UnknownKey : public ConfigError {
public:
    explicit UnknownKey(const std::string& key)
        : ConfigError("unknown config key: " + key), key_(key) {}
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

class TypeMismatch : public ConfigError {
public:
    TypeMismatch(const std::string& key, const std::string& value)
        : ConfigError("config key " + key + ": cannot parse value '" + value + "'"),
          key_(key) {}
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

class ConstraintViolation : public ConfigError {
public:
    ConstraintViolation(const std::string& key, const std::string& what)
        : ConfigError("constraint violated for " + key + ": " + what), key_(key) {}
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

// --- numeric regime errors (CLI exit code 3) ---

class NoSignChange : public Error {
public:
    using Error::Error;
};

class NotPositiveDefinite : public Error {
public:
    using Error::Error;
};

class NotCoercive : public Error {
public:
    using Error::Error;
};

class Extinct : public Error {
public:
    using Error::Error;
};

class GridTooCoarse : public Error {
public:
    using Error::Error;
};

class TooManyCombinations : public Error {
public:
    using Error::Error;
};

class DivisionByZero : public Error {
public:
    using Error::Error;
};

// --- iteration failures (CLI exit code 2) ---

class MaxIterations : public Error {
public:
    using Error::Error;
};

class NotMonotone : public Error {
public:
    using Error::Error;
};

class JacobianSingular : public Error {
public:
    using Error::Error;
};

class Diverged : public Error {
public:
    using Error::Error;
};

/// Fixed-point sweep did not meet its stopping rule; keeps the payoff trace
/// so callers can see how far it got.
class NotConverged : public Error {
public:
    NotConverged(const std::string& what, std::vector<double> trace)
        : Error(what), trace_(std::move(trace)) {}
    const std::vector<double>& trace() const { return trace_; }

private:
    std::vector<double> trace_;
};

}  // namespace harvest
