#pragma once

#include <array>
#include <Eigen/Dense>

#include "strsim/errors.hpp"

namespace strsim {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;

/// Point in the ambient space-time, geometric units (G = c = 1).
/// Cartesian kind: (x0, x1, x2, x3). Spherical kind: (t, r, alpha, beta).
struct SpacetimePoint {
    Vec4 coords = Vec4::Zero();
};

enum class MetricKind { Minkowski, SchwarzschildCartesian, SchwarzschildSpherical };

/// Ambient metric selector. mass = 0 is only meaningful as the flat limit,
/// so the factories normalize a zero mass to the Minkowski kind.
struct MetricField {
    MetricKind kind = MetricKind::Minkowski;
    double mass = 0.0;
    /// Evaluation requires r > 2m(1 + horizon_safety) for Schwarzschild kinds.
    double horizon_safety = 1e-6;

    static MetricField minkowski();
    static MetricField schwarzschild_cartesian(double mass, double horizon_safety = 1e-6);
    static MetricField schwarzschild_spherical(double mass, double horizon_safety = 1e-6);
};

/// Metric, inverse and connection coefficients at one point.
/// christoffel[C](A, B) is symmetric in (A, B).
struct MetricValue {
    Mat4 g = Mat4::Zero();
    Mat4 ginv = Mat4::Zero();
    std::array<Mat4, 4> christoffel{};
};

/// Evaluate the metric, its inverse and the connection at a point.
MetricValue evaluate_metric(const MetricField& field, const SpacetimePoint& point);

/// Max over (C,A,B) of |analytic Christoffel - central finite difference of g|.
/// Validation helper; the analytic path is what the solver uses.
double christoffel_fd_error(const MetricField& field, const SpacetimePoint& point, double h);

/// Map spherical coordinates (t, r, alpha, beta) to Cartesian (x0, x1, x2, x3).
SpacetimePoint spherical_to_cartesian_point(const SpacetimePoint& spherical);

/// Jacobian d(x0..x3)/d(t,r,alpha,beta) of the chart map at a spherical point.
Mat4 spherical_to_cartesian_jacobian(const SpacetimePoint& spherical);

} // namespace strsim
