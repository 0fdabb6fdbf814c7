#pragma once

#include <stdexcept>
#include <string>

namespace aggsync {

// Error taxonomy shared by every module. All failures are thrown; callers
// that need exit codes (the CLI) translate at the boundary.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionError : Error {
    using Error::Error;
};
// Structural precondition violated (not skew-symmetric, not symmetric, ...).
struct StructureError : Error {
    using Error::Error;
};
// NaN/Inf produced, iteration failed to converge, and similar.
struct NumericError : Error {
    using Error::Error;
};
// Near-zero vector or singular matrix where a direction is required.
struct DegenerateStateError : Error {
    using Error::Error;
};
struct ConfigError : Error {
    using Error::Error;
};
// Operation invoked on a state it does not apply to (e.g. limit checks on a
// non-converged trajectory).
struct StateError : Error {
    using Error::Error;
};
struct RootError : Error {
    using Error::Error;
};
struct FitError : Error {
    using Error::Error;
};
struct CalibrationError : Error {
    using Error::Error;
};

}  // namespace aggsync
