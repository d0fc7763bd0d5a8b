#pragma once

#include <stdexcept>
#include <string>

namespace jiosm {

/// Raised when a numerical precondition fails at run time (singular
/// covariance, lost positive-definiteness, unreachable bound, ...).
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised for malformed experiment configuration files or presets.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace jiosm
