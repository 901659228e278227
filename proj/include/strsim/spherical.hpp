#pragma once

#include <array>

#include "strsim/geometry.hpp"
#include "strsim/initial_data.hpp"
#include "strsim/solver.hpp"
#include "strsim/string_dynamics.hpp"

namespace strsim {

using Vec10 = Eigen::Matrix<double, 10, 1>;
using Mat10 = Eigen::Matrix<double, 10, 10>;

/// Spherical-chart state: (r, alpha, t_tau, r_tau, alpha_tau, beta_tau,
/// t_theta, r_theta, alpha_theta, beta_theta).
struct SphericalJet {
    Vec10 U = Vec10::Zero();

    double r() const { return U(0); }
    double alpha() const { return U(1); }
};

/// Induced metric in the spherical chart; m = 0 keeps the chart factors.
InducedMetric2 induced_metric_spherical(const SphericalJet& jet, double m);

/// The determinant written as a sum of squared 2x2 minors; must agree with
/// g00*g11 - g01^2 and is used as a consistency oracle.
double spherical_delta_expansion(const SphericalJet& jet, double m);

struct SphericalSystem {
    Mat10 A = Mat10::Zero();
    Vec10 B = Vec10::Zero();
};
/// Quasilinear form U_tau + A U_theta + B = 0 in the spherical chart. The
/// derivative block uses contravariant metric ratios.
SphericalSystem assemble_spherical(const SphericalJet& jet, double m, double polar_margin = 1e-3);

/// Analytic eigenvectors: columns 0..3 carry speed lambda_minus, 4..7 speed
/// lambda_plus, 8..9 speed 0.
struct SphericalEigen {
    double lambda_minus = 0.0;
    double lambda_plus = 0.0;
    Mat10 right = Mat10::Zero();
    Mat10 left = Mat10::Zero();
};
SphericalEigen spherical_eigen_structure(const InducedMetric2& g);

/// Riemann variables: R0 = r, R1 = alpha, R[2..5] = tau-derivs + lambda_minus
/// * theta-derivs, R[6..9] = tau-derivs + lambda_plus * theta-derivs.
Vec10 to_spherical_riemann(const SphericalJet& jet, double lambda_minus, double lambda_plus);
SphericalJet from_spherical_riemann(const Vec10& R, double lambda_minus, double lambda_plus);

/// The six source expressions written purely in Riemann variables and the
/// speeds; equals the quasilinear sources through the substitution. Throws
/// PolarSingularity when |sin R1| is below the margin.
std::array<double, 6> spherical_riemann_sources(const Vec10& R, double lambda_minus,
                                                double lambda_plus, double m,
                                                double polar_margin = 1e-3);

/// Spherical state from the Cartesian data profiles at one theta.
SphericalJet spherical_jet_from_cartesian(const WorldSheetJet& cart, double polar_margin = 1e-3);

/// First-order upwind integrator for the spherical-chart system, fed by
/// Cartesian initial data mapped through the chart. Snapshots are emitted in
/// Cartesian components so results are directly comparable across charts.
/// Validation path only.
SolveResult solve_spherical_upwind(const InitialData& data, double m, const GridParams& grid,
                                   const SolverParams& params, double polar_margin = 1e-3);

/// Max pointwise deviation of the stored positions of two snapshots over
/// [theta_lo, theta_hi], all four components.
double snapshot_deviation(const Snapshot& a, const Snapshot& b, double theta_lo, double theta_hi,
                          int samples);

} // namespace strsim
