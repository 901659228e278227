#include "strsim/geometry.hpp"

#include <cmath>

namespace strsim {

MetricField MetricField::minkowski() { return MetricField{MetricKind::Minkowski, 0.0, 1e-6}; }

MetricField MetricField::schwarzschild_cartesian(double mass, double horizon_safety) {
    if (mass < 0.0) throw SimError("metric: mass must be nonnegative");
    if (mass == 0.0) return minkowski();
    return MetricField{MetricKind::SchwarzschildCartesian, mass, horizon_safety};
}

MetricField MetricField::schwarzschild_spherical(double mass, double horizon_safety) {
    if (mass < 0.0) throw SimError("metric: mass must be nonnegative");
    if (mass == 0.0) return minkowski();
    return MetricField{MetricKind::SchwarzschildSpherical, mass, horizon_safety};
}

namespace {

MetricValue minkowski_value() {
    MetricValue out;
    for (auto& c : out.christoffel) c.setZero();
    out.g = Vec4(-1.0, 1.0, 1.0, 1.0).asDiagonal();
    out.ginv = out.g;
    return out;
}

MetricValue schwarzschild_cartesian_value(double m, const SpacetimePoint& pt,
                                          double horizon_safety) {
    const Vec3 x = pt.coords.tail<3>();
    const double r = x.norm();
    if (r <= 2.0 * m * (1.0 + horizon_safety))
        throw HorizonViolation("metric: point inside r = 2m safety margin");

    MetricValue out;
    for (auto& c : out.christoffel) c.setZero();
    const double f = (r - 2.0 * m) / r;
    const double phi = 2.0 * m / (r * r * (r - 2.0 * m));

    out.g(0, 0) = -f;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            out.g(i + 1, j + 1) = (i == j ? 1.0 : 0.0) + phi * x(i) * x(j);

    out.ginv(0, 0) = -1.0 / f;
    const double c = 2.0 * m / (r * r * r);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            out.ginv(i + 1, j + 1) = (i == j ? 1.0 : 0.0) - c * x(i) * x(j);

    // Gamma^0_{0k} = m x^k / (r^2 (r-2m))
    const double g0 = m / (r * r * (r - 2.0 * m));
    for (int k = 0; k < 3; ++k) {
        out.christoffel[0](0, k + 1) = g0 * x(k);
        out.christoffel[0](k + 1, 0) = g0 * x(k);
    }
    // Gamma^i_{00} = m (r-2m) x^i / r^4
    const double a = m * (r - 2.0 * m) / (r * r * r * r);
    // Gamma^i_{jk} = (2m/r^3) x^i delta_jk - m(3r-4m)/(r^5 (r-2m)) x^i x^j x^k
    const double b = 2.0 * m / (r * r * r);
    const double cc = m * (3.0 * r - 4.0 * m) / (std::pow(r, 5) * (r - 2.0 * m));
    for (int i = 0; i < 3; ++i) {
        out.christoffel[i + 1](0, 0) = a * x(i);
        for (int j = 0; j < 3; ++j)
            for (int k = j; k < 3; ++k) {
                const double value =
                    b * x(i) * (j == k ? 1.0 : 0.0) - cc * x(i) * x(j) * x(k);
                out.christoffel[i + 1](j + 1, k + 1) = value;
                out.christoffel[i + 1](k + 1, j + 1) = value;
            }
    }
    return out;
}

MetricValue schwarzschild_spherical_value(double m, const SpacetimePoint& pt,
                                          double horizon_safety) {
    const double r = pt.coords(1);
    const double alpha = pt.coords(2);
    if (r <= 2.0 * m * (1.0 + horizon_safety))
        throw HorizonViolation("metric: point inside r = 2m safety margin");
    const double sa = std::sin(alpha), ca = std::cos(alpha);
    if (std::abs(sa) < 1e-12)
        throw PolarSingularity("metric: spherical chart degenerate at sin(alpha) = 0");

    MetricValue out;
    for (auto& c : out.christoffel) c.setZero();
    const double f = 1.0 - 2.0 * m / r;
    out.g = Vec4(-f, 1.0 / f, r * r, r * r * sa * sa).asDiagonal();
    out.ginv = Vec4(-1.0 / f, f, 1.0 / (r * r), 1.0 / (r * r * sa * sa)).asDiagonal();

    auto& G = out.christoffel;
    const double mr2 = m / (r * r);
    G[0](0, 1) = G[0](1, 0) = mr2 / f;             // t,tr
    G[1](0, 0) = mr2 * f;                          // r,tt
    G[1](1, 1) = -mr2 / f;                         // r,rr
    G[1](2, 2) = -(r - 2.0 * m);                   // r,alpha alpha
    G[1](3, 3) = -(r - 2.0 * m) * sa * sa;         // r,beta beta
    G[2](1, 2) = G[2](2, 1) = 1.0 / r;             // alpha,r alpha
    G[2](3, 3) = -sa * ca;                         // alpha,beta beta
    G[3](1, 3) = G[3](3, 1) = 1.0 / r;             // beta,r beta
    G[3](2, 3) = G[3](3, 2) = ca / sa;             // beta,alpha beta
    return out;
}

} // namespace

MetricValue evaluate_metric(const MetricField& field, const SpacetimePoint& point) {
    if (!point.coords.allFinite()) throw SimError("metric: point has non-finite coordinates");
    switch (field.kind) {
        case MetricKind::Minkowski: return minkowski_value();
        case MetricKind::SchwarzschildCartesian:
            return schwarzschild_cartesian_value(field.mass, point, field.horizon_safety);
        case MetricKind::SchwarzschildSpherical:
            return schwarzschild_spherical_value(field.mass, point, field.horizon_safety);
    }
    throw SimError("metric: unknown kind");
}

double christoffel_fd_error(const MetricField& field, const SpacetimePoint& point, double h) {
    const MetricValue at = evaluate_metric(field, point);

    // dg[D](A,B) = d g_AB / d x^D by central differences
    std::array<Mat4, 4> dg;
    for (int d = 0; d < 4; ++d) {
        SpacetimePoint plus = point, minus = point;
        plus.coords(d) += h;
        minus.coords(d) -= h;
        dg[d] = (evaluate_metric(field, plus).g - evaluate_metric(field, minus).g) / (2.0 * h);
    }

    double worst = 0.0;
    for (int c = 0; c < 4; ++c)
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) {
                double fd = 0.0;
                for (int d = 0; d < 4; ++d)
                    fd += 0.5 * at.ginv(c, d) * (dg[a](d, b) + dg[b](d, a) - dg[d](a, b));
                worst = std::max(worst, std::abs(fd - at.christoffel[c](a, b)));
            }
    return worst;
}

SpacetimePoint spherical_to_cartesian_point(const SpacetimePoint& s) {
    const double r = s.coords(1), alpha = s.coords(2), beta = s.coords(3);
    SpacetimePoint out;
    out.coords(0) = s.coords(0);
    out.coords(1) = r * std::sin(alpha) * std::cos(beta);
    out.coords(2) = r * std::sin(alpha) * std::sin(beta);
    out.coords(3) = r * std::cos(alpha);
    return out;
}

Mat4 spherical_to_cartesian_jacobian(const SpacetimePoint& s) {
    const double r = s.coords(1), alpha = s.coords(2), beta = s.coords(3);
    const double sa = std::sin(alpha), ca = std::cos(alpha);
    const double sb = std::sin(beta), cb = std::cos(beta);
    Mat4 J = Mat4::Zero();
    J(0, 0) = 1.0;
    J(1, 1) = sa * cb;
    J(1, 2) = r * ca * cb;
    J(1, 3) = -r * sa * sb;
    J(2, 1) = sa * sb;
    J(2, 2) = r * ca * sb;
    J(2, 3) = r * sa * cb;
    J(3, 1) = ca;
    J(3, 2) = -r * sa;
    return J;
}

} // namespace strsim
