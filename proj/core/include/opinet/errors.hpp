#pragma once

#include <stdexcept>
#include <string>

namespace opinet {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Input fails a documented precondition or invariant.
struct ValidationError : Error {
    using Error::Error;
};

/// A rate matrix / generator is not irreducible.
struct ReducibleError : ValidationError {
    using ValidationError::ValidationError;
};

/// Requested master state space exceeds the configured guard.
struct StateSpaceTooLarge : ValidationError {
    using ValidationError::ValidationError;
};

struct DimensionMismatch : ValidationError {
    using ValidationError::ValidationError;
};

/// Estimation window too short to form batch-means errors.
struct WindowTooShort : ValidationError {
    using ValidationError::ValidationError;
};

} // namespace opinet
