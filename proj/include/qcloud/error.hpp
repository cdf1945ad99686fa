#pragma once

#include <stdexcept>
#include <string>

namespace qcloud {

enum class ErrorCode {
    SyntaxError,
    UnsupportedGate,
    IndexOutOfRange,
    InvalidOperands,
    UnsupportedFamily,
    BadParams,
    ConnectivityFailure,
    InsufficientCapacity,
    InfeasibleBalance,
    NoFeasibleAssignment,
    DeadlockDetected,
    EmptyRun,
    ConfigError,
    InvariantViolation,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string msg)
        : std::runtime_error(std::move(msg)), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) {
    throw Error(code, msg);
}

}  // namespace qcloud
