#pragma once

// Error taxonomy. Each class corresponds to one CLI exit code, so library
// code signals failures by type and the front end stays a thin switch.

#include <stdexcept>
#include <string>

namespace corrsamp {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidInput = 2;
inline constexpr int kExitResourceLimit = 3;
inline constexpr int kExitInvariantViolation = 4;

// Bad user input: malformed JSON, out-of-range parameters, schema violations.
class InvalidInputError : public std::runtime_error {
public:
    explicit InvalidInputError(const std::string& msg) : std::runtime_error(msg) {}
};

// Request is well formed but exceeds a documented desk-scale cap.
class ResourceLimitError : public std::runtime_error {
public:
    explicit ResourceLimitError(const std::string& msg) : std::runtime_error(msg) {}
};

// Internal contract broke. Always a bug, never a user error.
class InvariantViolationError : public std::runtime_error {
public:
    explicit InvariantViolationError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace corrsamp
