#pragma once

#include <stdexcept>
#include <string>

namespace klab {

enum class ErrorKind {
    Usage,                  // bad arguments / malformed specs
    NotAUnit,               // operand shares a factor with the modulus
    OracleScaleExceeded,    // direct summation requested above its ceiling
    ScaleExceeded,          // combinatorial enumeration guard tripped
    AllocationFailure,
    SeparationViolated,     // shift set has two elements congruent mod p
    CardinalityTooLarge,    // |I| >= p
    ModulusMismatch,
    ZeroTuple,
    EmptySample,
    BadInterval,
    QuadratureNotConverged,
    HypothesisViolated,     // a named precondition of an asymptotic check failed
    Io,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) {
    throw Error(kind, msg);
}

const char* error_kind_name(ErrorKind kind);

} // namespace klab
