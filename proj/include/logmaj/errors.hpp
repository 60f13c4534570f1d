#pragma once

#include <stdexcept>
#include <string>

namespace logmaj {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Evaluation of a scalar function failed at a concrete point
/// (outside the domain, log of a non-positive value, division by zero).
class EvalError : public Error {
public:
    EvalError(const std::string& msg, double x)
        : Error(msg + " (at x=" + std::to_string(x) + ")"), at_x(x) {}

    double at_x;
};

} // namespace logmaj
