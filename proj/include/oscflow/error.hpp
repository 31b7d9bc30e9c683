#pragma once

#include <stdexcept>
#include <string>

namespace oscflow {

enum class ErrorCode {
    invalid_argument,
    invalid_radius,
    invalid_profile,
    invalid_energy,
    singular_gradient,
    domain,
    cfl_violation,
    too_large,
    capacity_overflow,
    io,
    internal,
};

const char* to_string(ErrorCode code);

/// Single exception type for the library; the code tells callers which
/// precondition failed.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

inline const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::invalid_argument: return "invalid argument";
        case ErrorCode::invalid_radius: return "invalid radius";
        case ErrorCode::invalid_profile: return "invalid profile";
        case ErrorCode::invalid_energy: return "invalid energy";
        case ErrorCode::singular_gradient: return "singular gradient";
        case ErrorCode::domain: return "domain error";
        case ErrorCode::cfl_violation: return "CFL violation";
        case ErrorCode::too_large: return "problem too large";
        case ErrorCode::capacity_overflow: return "capacity overflow";
        case ErrorCode::io: return "I/O error";
        case ErrorCode::internal: return "internal error";
    }
    return "error";
}

}  // namespace oscflow
