#pragma once

#include <stdexcept>
#include <string>

namespace strsim {

/// Base class for all library errors.
struct SimError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A point (or evolving string) reached r <= 2m plus the active safety margin.
struct HorizonViolation : SimError {
    using SimError::SimError;
};

/// Spherical-chart evaluation too close to sin(alpha) = 0.
struct PolarSingularity : SimError {
    using SimError::SimError;
};

/// Induced metric determinant is not negative where a time-like state is required.
struct NotTimelike : SimError {
    using SimError::SimError;
};

/// Induced metric (or a leading coefficient) is numerically degenerate.
struct DegenerateMetric : SimError {
    using SimError::SimError;
};

/// |g11| fell below the relative floor; the quasilinear system cannot be formed.
struct DegenerateG11 : SimError {
    using SimError::SimError;
};

/// lambda_plus - lambda_minus below floor; characteristic variables not invertible.
struct CoincidentCharacteristics : SimError {
    using SimError::SimError;
};

/// Initial data failed one of the admissibility assumptions.
struct AssumptionViolated : SimError {
    using SimError::SimError;
};

/// Adaptive quadrature failed to reach the requested tolerance.
struct QuadratureFailure : SimError {
    using SimError::SimError;
};

/// Flat-space closed-form solution requested for data outside the orthonormal gauge.
struct GaugeViolation : SimError {
    using SimError::SimError;
};

/// Configuration file or flag error; message carries the offending field.
struct ConfigError : SimError {
    using SimError::SimError;
};

} // namespace strsim
