#pragma once

#include <utility>
#include <vector>
#include <Eigen/Dense>

#include "strsim/geometry.hpp"

namespace strsim {

using Mat12 = Eigen::Matrix<double, 12, 12>;
using Vec12 = Eigen::Matrix<double, 12, 1>;

/// State of the string at one (t, theta) point: position, t-derivative,
/// theta-derivative of the immersion, each a 4-vector (time, space).
struct WorldSheetJet {
    Vec4 u = Vec4::Zero(); // (x0, x1, x2, x3)
    Vec4 v = Vec4::Zero(); // d/dt
    Vec4 w = Vec4::Zero(); // d/theta

    Vec12 packed() const;
    static WorldSheetJet unpack(const Vec12& U);
};

/// 2x2 induced metric on the world sheet.
struct InducedMetric2 {
    double g00 = 0.0, g01 = 0.0, g11 = 0.0;
    double delta = 0.0; // g00*g11 - g01^2
    bool timelike() const { return delta < 0.0; }
};

/// Characteristic variables: S = position, P = v + lambda_minus * w,
/// Q = v + lambda_plus * w.
struct CharacteristicState {
    Vec4 S = Vec4::Zero();
    Vec4 P = Vec4::Zero();
    Vec4 Q = Vec4::Zero();
};

/// Eigenvalues and full left/right eigenvector sets of the 12x12 system matrix.
/// Columns of `right` are right eigenvectors; rows of `left` are left ones.
/// Groups: 0..3 speed 0, 4..7 speed lambda_minus, 8..11 speed lambda_plus.
struct EigenStructure {
    double lambda_minus = 0.0;
    double lambda_plus = 0.0;
    Mat12 right = Mat12::Zero();
    Mat12 left = Mat12::Zero();
};

/// Induced metric from the jet in the Cartesian chart; m = 0 is the flat case.
InducedMetric2 induced_metric_cartesian(const WorldSheetJet& jet, double m);

/// (lambda_minus, lambda_plus) from the induced metric.
/// Throws DegenerateG11 when |g11| is below a relative floor and NotTimelike
/// when the discriminant is not positive.
std::pair<double, double> characteristic_speeds(const InducedMetric2& g);

EigenStructure eigen_structure(const InducedMetric2& g);

/// Quasilinear form: U_t + A U_theta + B = 0.
struct SystemMatrices {
    Mat12 A = Mat12::Zero();
    Vec12 B = Vec12::Zero();
};
SystemMatrices assemble_system(const WorldSheetJet& jet, double m);

/// x_tt from the second-order equations, given the theta-derivatives of v and
/// w at the point. Independent route through the ambient connection; used to
/// cross-check the assembled source terms.
Vec4 second_order_acceleration(const WorldSheetJet& jet, const Vec4& v_theta, const Vec4& w_theta,
                               double m);

/// Analytic gradient of a characteristic speed with respect to the 12 state
/// components (u, v, w order).
Vec12 speed_gradient(const WorldSheetJet& jet, double m, bool plus);

struct CharacteristicDecomposition {
    CharacteristicState state;
    double lambda_minus = 0.0;
    double lambda_plus = 0.0;
};
CharacteristicDecomposition to_characteristic(const WorldSheetJet& jet, double m);

/// Inverse of the characteristic change of variables.
/// Throws CoincidentCharacteristics when the gap is below a relative floor.
WorldSheetJet from_characteristic(const CharacteristicState& cs, double lambda_minus,
                                  double lambda_plus);

/// Right-hand sides of the characteristic-variable system. The P and Q
/// families share one source; S is transported by the weighted average.
struct SourceTerms {
    Vec4 s_rhs = Vec4::Zero();
    Vec4 pq_rhs = Vec4::Zero();
};
SourceTerms characteristic_rhs(const CharacteristicState& cs, double lambda_minus,
                               double lambda_plus, double m);

/// Max central-difference residuals of the two transport identities
/// d(lambda-)/dt + lambda+ d(lambda-)/dtheta = 0 (and with +/- swapped)
/// over a (t, theta) grid of sampled speed fields. Rows index time levels.
std::pair<double, double> transport_residual(const std::vector<std::vector<double>>& lambda_minus,
                                             const std::vector<std::vector<double>>& lambda_plus,
                                             double dt, double dtheta);

namespace testhooks {
/// Fault injection for the verification suites: deliberately corrupts one
/// term of the characteristic source so that consistency suites must fail.
enum class SourceMutation { None, FlipRadialTerm };
extern SourceMutation source_mutation;
} // namespace testhooks

} // namespace strsim
