#pragma once

#include <stdexcept>
#include <string>

namespace qrec {

/// Bad argument values (indices out of range, invalid parameters).
struct ArgumentError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Shape mismatches (non-square input, incompatible dimensions).
struct DimensionError : ArgumentError {
    using ArgumentError::ArgumentError;
};

/// Mathematical domain violations (non-Hermitian input, negative spectrum for sqrt).
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Iterative solver failed to reach its tolerance within the iteration cap.
struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Operation called on input that violates its stated precondition.
struct PreconditionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Inconsistent database specification (incompatible measure/state kind, bad sizes).
struct SpecError : ArgumentError {
    using ArgumentError::ArgumentError;
};

/// File read/write failures.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace qrec
