#pragma once

#include <functional>
#include <random>
#include <vector>
#include <Eigen/Dense>

#include "strsim/geometry.hpp"

namespace strsim {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Ambient metric data at one point, for an (n+1)-dimensional space-time.
struct MetricValueN {
    MatrixXd g;
    MatrixXd ginv;
    std::vector<MatrixXd> christoffel; // christoffel[C](A, B)
};

/// Ambient Lorentzian space of spatial dimension n with a pointwise evaluator.
struct AmbientMetric {
    int n = 3;
    std::function<MetricValueN(const VectorXd&)> eval;
};

AmbientMetric minkowski_ambient(int n);
/// Wrap a 4-dimensional metric field (n = 3).
AmbientMetric ambient_from_field(const MetricField& field);

/// Second-order jet of an immersion u -> x(u), u in R^{p+1}, x in R^{n+1}.
struct ImmersionJet {
    int n = 3;
    int p = 1;
    VectorXd position;            // n+1
    MatrixXd first;               // (n+1) x (p+1), column mu = dx/du^mu
    std::vector<VectorXd> second; // packed mu*(p+1)+nu, symmetric; may be empty

    const VectorXd& second_deriv(int mu, int nu) const { return second[mu * (p + 1) + nu]; }
    bool has_second() const { return !second.empty(); }
};

/// Pullback metric on the world volume.
struct InducedMetricN {
    MatrixXd g;
    MatrixXd ginv;
    double det = 0.0;
    bool timelike = false; // det < 0
};

/// G = Q ginduced^-1 Q^T, M = I - G gtilde, and the tension vector E.
struct ExtremalOperators {
    MatrixXd G;
    MatrixXd M;
    VectorXd E;
};

/// Pullback of the ambient metric through the jet.
/// Throws DegenerateMetric when |det| < degenerate_floor.
InducedMetricN induced_metric(const ImmersionJet& jet, const MetricValueN& ambient,
                              double degenerate_floor = 1e-14);

/// E_C = g^{mu nu} (x^C_{mu nu} + Gamma^C_{AB} x^A_mu x^B_nu).
VectorXd tension_vector(const ImmersionJet& jet, const MetricValueN& ambient,
                        const InducedMetricN& induced);

ExtremalOperators extremal_operators(const ImmersionJet& jet, const MetricValueN& ambient,
                                     const InducedMetricN& induced);

/// Rank of M and its real eigenvalues sorted ascending.
/// Requires a time-like jet.
struct ProjectorSpectrum {
    int rank = 0;
    std::vector<double> eigenvalues;
    double max_imag = 0.0;       // largest |imaginary part| seen
    double idempotency_gap = 0.0; // ||M^2 - M||_inf
};
ProjectorSpectrum normal_projector_spectrum(const ImmersionJet& jet, const MetricValueN& ambient,
                                            const InducedMetricN& induced);

/// (||M Q Q^T||_inf, ||Q^T M Q||_inf); both vanish identically in exact arithmetic.
std::pair<double, double> annihilation_residuals(const ImmersionJet& jet,
                                                 const MetricValueN& ambient,
                                                 const InducedMetricN& induced);

/// Analytic immersion: full jet at any parameter point.
struct ImmersionFn {
    int n = 3;
    int p = 1;
    std::function<ImmersionJet(const VectorXd& u)> jet_at;
};

/// Residual of the identity "Euler-Lagrange operator equals M E", with the
/// induced-metric connection built by central finite differences of the
/// pullback metric along the immersion (step h).
double euler_lagrange_residual(const ImmersionFn& immersion, const AmbientMetric& ambient,
                               const VectorXd& u, double h);

/// Options for rejection sampling of time-like jets.
struct JetSampleOptions {
    double det_margin = 1e-3;  // accept only det < -margin
    double time_bias = 1.0;    // added to the X_0 time component
    int max_attempts = 10000;
};

/// Random time-like jet (first derivatives only) for property tests.
/// For Schwarzschild ambients the position is kept well outside the horizon.
ImmersionJet random_timelike_jet(const AmbientMetric& ambient, int p, std::mt19937_64& rng,
                                 const JetSampleOptions& opts = {});

} // namespace strsim
