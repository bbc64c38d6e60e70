#pragma once

#include <stdexcept>
#include <string>

namespace fmcm {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Input outside the mathematical domain of an operation.
struct DomainError : Error {
    using Error::Error;
};

/// A spec or measure that is structurally valid but useless for the
/// requested operation (e.g. fewer than two distinct plane directions).
struct DegenerateSpec : Error {
    using Error::Error;
};

/// A set that must be nonempty turned out empty.
struct EmptySet : Error {
    using Error::Error;
};

/// Adaptive quadrature exhausted its panel budget before reaching tolerance.
struct QuadratureFailure : Error {
    using Error::Error;
};

/// A value left the representable range of double.
struct OverflowError : Error {
    using Error::Error;
};

/// The ODE integrator stalled or exceeded its step budget.
struct IntegrationFailure : Error {
    using Error::Error;
};

/// A quantity left its proven a priori bracket by more than the allowed slack.
struct BracketViolation : Error {
    using Error::Error;
};

/// An extrapolated constant failed to settle.
struct PoorConvergence : Error {
    using Error::Error;
};

/// Query outside the range covered by a stored profile or grid.
struct OutOfRange : Error {
    using Error::Error;
};

/// Newton iteration failed to reach the residual tolerance.
struct NonConvergence : Error {
    using Error::Error;
};

/// The sparse linear solver reported a singular or badly pivoted system.
struct LinearSolveFailure : Error {
    using Error::Error;
};

/// An ordered pair of fields violated its comparison by more than tolerance.
struct SandwichViolation : Error {
    using Error::Error;
};

/// Malformed or inconsistent run configuration.
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace fmcm
