#pragma once

#include <stdexcept>
#include <string>

namespace coprime {

enum class ErrorCode {
    NotCoprime,
    InvalidParam,
    GridMismatch,
    GridResolution,
    LagOutOfRange,
    SlotCollision,
    TooFast,
    NoFeasibleShift,
    UndefinedSpectrum,
    BadConfig,
};

inline const char* to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::NotCoprime: return "NotCoprime";
    case ErrorCode::InvalidParam: return "InvalidParam";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::GridResolution: return "GridResolution";
    case ErrorCode::LagOutOfRange: return "LagOutOfRange";
    case ErrorCode::SlotCollision: return "SlotCollision";
    case ErrorCode::TooFast: return "TooFast";
    case ErrorCode::NoFeasibleShift: return "NoFeasibleShift";
    case ErrorCode::UndefinedSpectrum: return "UndefinedSpectrum";
    case ErrorCode::BadConfig: return "BadConfig";
    }
    return "Unknown";
}

/// Library-wide exception. Carries a machine-checkable code next to the
/// human-readable message.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

} // namespace coprime
