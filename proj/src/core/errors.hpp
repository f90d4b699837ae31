#pragma once

#include <stdexcept>
#include <string>

namespace bsur {

// Config or validation problem: bad spec, bad file contents, bad combination.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure that survived jitter escalation.
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

// Filesystem / IO failure.
struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace bsur
