#pragma once

#include <stdexcept>
#include <string>

namespace lplab {

/// Bad input: a precondition on parameters or data was violated.
/// `field()` names the offending parameter when one can be identified.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& message, std::string field = {})
        : std::invalid_argument(field.empty() ? message : field + ": " + message),
          field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// A computation ran but its result cannot be trusted at the requested
/// resolution (e.g. every scale is below the truncation limit).
class ReliabilityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace lplab
