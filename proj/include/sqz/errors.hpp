// errors.hpp — Exception types for contract violations and numeric failures

#pragma once

#include <stdexcept>
#include <string>

namespace sqz {

// Invalid dimensions, parameter domain violations, mismatched operands.
struct InvalidArgumentError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Requested truncation too small; carries the minimum admissible dimension.
struct TruncationError : std::runtime_error {
    int min_dim;
    TruncationError(const std::string& msg, int min_dim_) : std::runtime_error(msg), min_dim(min_dim_) {}
};

// Operation requested outside its supported regime (e.g. propagator off the level crossing).
struct RegimeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A target parameter cannot be reached within sanity bounds.
struct InfeasibleTargetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Integrator breakdown: step underflow, positivity loss, non-convergence.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed or unknown configuration input.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace sqz
