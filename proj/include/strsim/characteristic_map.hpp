#pragma once

#include <utility>
#include <vector>

#include "strsim/numerics.hpp"

namespace strsim {

/// Initial characteristic speeds sampled over a window [-L, L]; the fields are
/// extended by their endpoint values outside it.
struct LambdaInitial {
    UniformSpline lambda_minus0;
    UniformSpline lambda_plus0;
    double window = 0.0; // L
    double kappa = 0.0;  // measured min of (lambda_plus0 - lambda_minus0)
};

/// Admissibility report for the initial speeds.
///   h1: bounded C1 norms (finite samples and spline derivatives)
///   h2: strict gap, with the measured kappa
///   h3: no slow-behind/fast-ahead ordering violation; prefix-sweep witness on
///       failure
struct AssumptionReport {
    bool h1 = false;
    bool h2 = false;
    bool h3 = false;
    double c1_norm_minus = 0.0;
    double c1_norm_plus = 0.0;
    double kappa = 0.0;
    double h3_margin = 0.0; // min over theta1 <= theta2 of lambda_plus0(theta2) - lambda_minus0(theta1)
    double witness_theta1 = 0.0;
    double witness_theta2 = 0.0;
    bool pass() const { return h1 && h2 && h3; }
};

AssumptionReport check_assumptions(const LambdaInitial& init);

/// The change of variables (t, theta) <-> (tau, vartheta) that straightens
/// both characteristic families. Built once from the initial speeds; all
/// queries are pure.
///
/// theta0/phi0 are the t = 0 legs. phi(tau, .) is the closed-form inverse leg
/// ((tau, vartheta) -> theta); theta_map(t, .) inverts it by bisection.
class CoordinateMap {
  public:
    static CoordinateMap build(const LambdaInitial& init);

    double theta0(double theta) const { return theta_to_vt_.value(theta); }
    double phi0(double vartheta) const { return vt_to_theta_.value(vartheta); }
    double phi(double tau, double vartheta) const;
    double theta_map(double t, double theta) const;

    /// Transported speeds in (tau, vartheta): (lambda_minus, lambda_plus).
    std::pair<double, double> lambda_tilde(double tau, double vartheta) const;
    /// Speeds at a physical point (t, theta).
    std::pair<double, double> lambda_at(double t, double theta) const;

    /// Jacobian d(tau, vartheta)/d(t, theta) = 2 / gap at (t, theta).
    double jacobian(double t, double theta) const;

    double kappa() const { return init_.kappa; }
    double window() const { return init_.window; }
    double vartheta_of_window_left() const { return vt_left_; }
    double vartheta_of_window_right() const { return vt_right_; }
    double max_abs_speed() const { return max_abs_lambda_; }
    const LambdaInitial& initial() const { return init_; }

  private:
    LambdaInitial init_;
    HermiteTable theta_to_vt_;
    HermiteTable vt_to_theta_;
    HermiteTable a_plus_;  // antiderivative of lambda_plus0 (Phi0(.))
    HermiteTable a_minus_; // antiderivative of lambda_minus0 (Phi0(.))
    double vt_left_ = 0.0, vt_right_ = 0.0;
    double max_abs_lambda_ = 0.0;
};

/// Max central-difference residual of the divergence identity
/// d/dt [2/gap] + d/dtheta [(lambda_plus + lambda_minus)/gap] = 0
/// over sampled speed fields on a uniform (t, theta) grid.
double conservation_residual(const std::vector<std::vector<double>>& lambda_minus,
                             const std::vector<std::vector<double>>& lambda_plus, double dt,
                             double dtheta);

} // namespace strsim
