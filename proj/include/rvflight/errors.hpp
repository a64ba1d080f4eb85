#pragma once

#include <stdexcept>
#include <string>

namespace rvflight {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input outside an operation's domain (zero norm, non-orthonormal DCM, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A parameterization evaluated at (or too close to) one of its singular
/// configurations. Propagation treats this as a guard, not a failure.
class SingularityError : public DomainError {
public:
    using DomainError::DomainError;
};

class ConfigError : public Error {
public:
    ConfigError(std::string field, const std::string& message)
        : Error("config field '" + field + "': " + message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

class IntegrationError : public Error {
public:
    IntegrationError(const std::string& message, double t)
        : Error(message + " (t = " + std::to_string(t) + " s)"), time_(t) {}

    double time() const noexcept { return time_; }

private:
    double time_;
};

}  // namespace rvflight
