#include "strsim/string_dynamics.hpp"

#include <cmath>

#include "strsim/numerics.hpp"

namespace strsim {

namespace {

// shared 1/r-style coefficients; all vanish in the flat case
struct RadialCoeffs {
    double r = 0.0;
    double f = 1.0;    // (r - 2m)/r
    double phi = 0.0;  // 2m / (r^2 (r - 2m))
    bool flat = true;
};

RadialCoeffs radial(const Vec3& x, double m) {
    RadialCoeffs c;
    if (m == 0.0) return c;
    c.flat = false;
    c.r = x.norm();
    if (c.r <= 2.0 * m * (1.0 + 1e-6))
        throw HorizonViolation("string state inside r = 2m safety margin");
    c.f = (c.r - 2.0 * m) / c.r;
    c.phi = 2.0 * m / (c.r * c.r * (c.r - 2.0 * m));
    return c;
}

double g11_floor(const InducedMetric2& g) {
    return 1e-12 * (std::abs(g.g00) + std::abs(g.g01) + 1.0);
}

} // namespace

Vec12 WorldSheetJet::packed() const {
    Vec12 U;
    U << u, v, w;
    return U;
}

WorldSheetJet WorldSheetJet::unpack(const Vec12& U) {
    WorldSheetJet jet;
    jet.u = U.segment<4>(0);
    jet.v = U.segment<4>(4);
    jet.w = U.segment<4>(8);
    return jet;
}

InducedMetric2 induced_metric_cartesian(const WorldSheetJet& jet, double m) {
    const Vec3 x = jet.u.tail<3>(), vs = jet.v.tail<3>(), ws = jet.w.tail<3>();
    const RadialCoeffs c = radial(x, m);
    const double xv = x.dot(vs), xw = x.dot(ws);

    InducedMetric2 g;
    g.g00 = -c.f * jet.v(0) * jet.v(0) + vs.squaredNorm() + c.phi * xv * xv;
    g.g01 = -c.f * jet.v(0) * jet.w(0) + vs.dot(ws) + c.phi * xv * xw;
    g.g11 = -c.f * jet.w(0) * jet.w(0) + ws.squaredNorm() + c.phi * xw * xw;
    g.delta = g.g00 * g.g11 - g.g01 * g.g01;
    return g;
}

std::pair<double, double> characteristic_speeds(const InducedMetric2& g) {
    if (std::abs(g.g11) < g11_floor(g))
        throw DegenerateG11("characteristic_speeds: |g11| below relative floor");
    if (!(g.delta < 0.0)) throw NotTimelike("characteristic_speeds: det g >= 0");
    return stable_quadratic_roots(g.g00, g.g01, g.g11);
}

EigenStructure eigen_structure(const InducedMetric2& g) {
    const auto [lm, lp] = characteristic_speeds(g);
    EigenStructure es;
    es.lambda_minus = lm;
    es.lambda_plus = lp;
    for (int k = 0; k < 4; ++k) {
        // speed-0 family: position components
        es.right(k, k) = 1.0;
        es.left(k, k) = 1.0;
        // speed lambda_minus family
        es.right(4 + k, 4 + k) = -lm;
        es.right(8 + k, 4 + k) = 1.0;
        es.left(4 + k, 4 + k) = 1.0;
        es.left(4 + k, 8 + k) = lp;
        // speed lambda_plus family
        es.right(4 + k, 8 + k) = -lp;
        es.right(8 + k, 8 + k) = 1.0;
        es.left(8 + k, 4 + k) = 1.0;
        es.left(8 + k, 8 + k) = lm;
    }
    return es;
}

SystemMatrices assemble_system(const WorldSheetJet& jet, double m) {
    const InducedMetric2 g = induced_metric_cartesian(jet, m);
    if (std::abs(g.g11) < g11_floor(g))
        throw DegenerateG11("assemble_system: |g11| below relative floor");
    if (!(g.delta < 0.0)) throw NotTimelike("assemble_system: det g >= 0");

    SystemMatrices sys;
    const double a = -2.0 * g.g01 / g.g11;
    const double b = g.g00 / g.g11;
    for (int k = 0; k < 4; ++k) {
        sys.A(4 + k, 4 + k) = a;
        sys.A(4 + k, 8 + k) = b;
        sys.A(8 + k, 4 + k) = -1.0;
    }

    sys.B.segment<4>(0) = -jet.v;

    const Vec3 x = jet.u.tail<3>(), vs = jet.v.tail<3>(), ws = jet.w.tail<3>();
    const RadialCoeffs c = radial(x, m);
    if (!c.flat) {
        const double xv = x.dot(vs), xw = x.dot(ws);
        const double v0 = jet.v(0), w0 = jet.w(0);
        const double q01 = g.g01 / g.g11, q00 = g.g00 / g.g11;

        sys.B(4) = c.phi * (v0 * xv - q01 * (v0 * xw + w0 * xv) + q00 * w0 * xw);

        const double r = c.r;
        const double time_part = v0 * v0 - 2.0 * q01 * v0 * w0 + q00 * w0 * w0;
        const double space_part =
            vs.squaredNorm() - 2.0 * q01 * vs.dot(ws) + q00 * ws.squaredNorm();
        const double radial_part = xv * xv - 2.0 * q01 * xv * xw + q00 * xw * xw;
        const double coeff = m * (r - 2.0 * m) / std::pow(r, 4) * time_part +
                             2.0 * m / std::pow(r, 3) * space_part +
                             m * (3.0 * r - 4.0 * m) / (std::pow(r, 5) * (2.0 * m - r)) *
                                 radial_part;
        for (int i = 0; i < 3; ++i) sys.B(5 + i) = x(i) * coeff;
    }
    return sys;
}

Vec4 second_order_acceleration(const WorldSheetJet& jet, const Vec4& v_theta, const Vec4& w_theta,
                               double m) {
    const InducedMetric2 g = induced_metric_cartesian(jet, m);
    if (!(g.delta < 0.0)) throw NotTimelike("second_order_acceleration: det g >= 0");
    const double iu00 = g.g11 / g.delta;  // contravariant components
    const double iu01 = -g.g01 / g.delta;
    const double iu11 = g.g00 / g.delta;

    const MetricField field = MetricField::schwarzschild_cartesian(m);
    SpacetimePoint pt;
    pt.coords = jet.u;
    const MetricValue mv = evaluate_metric(field, pt);

    Vec4 conn;
    for (int c = 0; c < 4; ++c) {
        const double vv = jet.v.dot(mv.christoffel[c] * jet.v);
        const double vw = jet.v.dot(mv.christoffel[c] * jet.w);
        const double ww = jet.w.dot(mv.christoffel[c] * jet.w);
        conn(c) = iu00 * vv + 2.0 * iu01 * vw + iu11 * ww;
    }
    return -(2.0 * iu01 * v_theta + iu11 * w_theta + conn) / iu00;
}

Vec12 speed_gradient(const WorldSheetJet& jet, double m, bool plus) {
    const InducedMetric2 g = induced_metric_cartesian(jet, m);
    const auto [lm, lp] = characteristic_speeds(g);
    const double lam = plus ? lp : lm;
    const double sq = std::sqrt(g.g01 * g.g01 - g.g00 * g.g11);
    const double sign = plus ? -1.0 : 1.0;

    const Vec3 x = jet.u.tail<3>(), vs = jet.v.tail<3>(), ws = jet.w.tail<3>();
    const RadialCoeffs c = radial(x, m);
    const double xv = x.dot(vs), xw = x.dot(ws);
    const double v0 = jet.v(0), w0 = jet.w(0);

    // dphi/dr and df/dr scaled into per-component form
    double dfdr = 0.0, dphidr = 0.0;
    if (!c.flat) {
        dfdr = 2.0 * m / (c.r * c.r * c.r); // d f / d x^i = dfdr * x^i (includes 1/r)
        dphidr = -2.0 * m * (3.0 * c.r - 4.0 * m) /
                 (std::pow(c.r, 4) * (c.r - 2.0 * m) * (c.r - 2.0 * m));
    }

    Vec12 grad = Vec12::Zero();
    auto master = [&](double dg00, double dg01, double dg11) {
        return sign * (dg00 + 2.0 * lam * dg01 + lam * lam * dg11) / (2.0 * sq);
    };

    // u components (u^0 never enters the metric)
    for (int i = 0; i < 3; ++i) {
        const double dg00 = -dfdr * x(i) * v0 * v0 + dphidr * x(i) * xv * xv +
                            2.0 * c.phi * xv * vs(i);
        const double dg01 = -dfdr * x(i) * v0 * w0 + dphidr * x(i) * xv * xw +
                            c.phi * (xw * vs(i) + xv * ws(i));
        const double dg11 = -dfdr * x(i) * w0 * w0 + dphidr * x(i) * xw * xw +
                            2.0 * c.phi * xw * ws(i);
        grad(1 + i) = master(dg00, dg01, dg11);
    }
    // v^0
    grad(4) = master(-2.0 * c.f * v0, -c.f * w0, 0.0);
    // v^i
    for (int i = 0; i < 3; ++i) {
        const double dg00 = 2.0 * vs(i) + 2.0 * c.phi * xv * x(i);
        const double dg01 = ws(i) + c.phi * xw * x(i);
        grad(5 + i) = master(dg00, dg01, 0.0);
    }
    // w^0
    grad(8) = master(0.0, -c.f * v0, -2.0 * c.f * w0);
    // w^i
    for (int i = 0; i < 3; ++i) {
        const double dg01 = vs(i) + c.phi * xv * x(i);
        const double dg11 = 2.0 * ws(i) + 2.0 * c.phi * xw * x(i);
        grad(9 + i) = master(0.0, dg01, dg11);
    }
    return grad;
}

CharacteristicDecomposition to_characteristic(const WorldSheetJet& jet, double m) {
    const InducedMetric2 g = induced_metric_cartesian(jet, m);
    const auto [lm, lp] = characteristic_speeds(g);
    CharacteristicDecomposition out;
    out.lambda_minus = lm;
    out.lambda_plus = lp;
    out.state.S = jet.u;
    out.state.P = jet.v + lm * jet.w;
    out.state.Q = jet.v + lp * jet.w;
    return out;
}

WorldSheetJet from_characteristic(const CharacteristicState& cs, double lambda_minus,
                                  double lambda_plus) {
    const double gap = lambda_plus - lambda_minus;
    if (std::abs(gap) < 1e-12 * (std::abs(lambda_plus) + std::abs(lambda_minus) + 1.0))
        throw CoincidentCharacteristics("from_characteristic: speed gap below floor");
    WorldSheetJet jet;
    jet.u = cs.S;
    jet.w = (cs.Q - cs.P) / gap;
    jet.v = (lambda_plus * cs.P - lambda_minus * cs.Q) / gap;
    return jet;
}

namespace testhooks {
SourceMutation source_mutation = SourceMutation::None;
} // namespace testhooks

SourceTerms characteristic_rhs(const CharacteristicState& cs, double lambda_minus,
                               double lambda_plus, double m) {
    SourceTerms out;
    const double gap = lambda_plus - lambda_minus;
    out.s_rhs = (lambda_plus * cs.P - lambda_minus * cs.Q) / gap;
    if (m == 0.0) return out;

    const Vec3 s = cs.S.tail<3>(), p = cs.P.tail<3>(), q = cs.Q.tail<3>();
    const double r = s.norm();
    if (r <= 2.0 * m * (1.0 + 1e-6))
        throw HorizonViolation("characteristic_rhs: |S| inside r = 2m safety margin");
    const double sp = s.dot(p), sq = s.dot(q);

    double radial_sign = -1.0;
    if (testhooks::source_mutation == testhooks::SourceMutation::FlipRadialTerm)
        radial_sign = 1.0;

    out.pq_rhs(0) = -m * (cs.P(0) * sq + cs.Q(0) * sp) / (r * r * (r - 2.0 * m));
    const double coeff = m * (2.0 * m - r) / std::pow(r, 4) * cs.P(0) * cs.Q(0) +
                         radial_sign * 2.0 * m / std::pow(r, 3) * p.dot(q) +
                         m * (3.0 * r - 4.0 * m) / (std::pow(r, 5) * (r - 2.0 * m)) * sp * sq;
    for (int i = 0; i < 3; ++i) out.pq_rhs(1 + i) = s(i) * coeff;
    return out;
}

std::pair<double, double> transport_residual(const std::vector<std::vector<double>>& lambda_minus,
                                             const std::vector<std::vector<double>>& lambda_plus,
                                             double dt, double dtheta) {
    double worst_minus = 0.0, worst_plus = 0.0;
    const std::size_t nt = lambda_minus.size();
    for (std::size_t k = 1; k + 1 < nt; ++k) {
        const std::size_t nx = lambda_minus[k].size();
        for (std::size_t j = 1; j + 1 < nx; ++j) {
            const double dmdt = (lambda_minus[k + 1][j] - lambda_minus[k - 1][j]) / (2.0 * dt);
            const double dmdx = (lambda_minus[k][j + 1] - lambda_minus[k][j - 1]) / (2.0 * dtheta);
            const double dpdt = (lambda_plus[k + 1][j] - lambda_plus[k - 1][j]) / (2.0 * dt);
            const double dpdx = (lambda_plus[k][j + 1] - lambda_plus[k][j - 1]) / (2.0 * dtheta);
            worst_minus = std::max(worst_minus, std::abs(dmdt + lambda_plus[k][j] * dmdx));
            worst_plus = std::max(worst_plus, std::abs(dpdt + lambda_minus[k][j] * dpdx));
        }
    }
    return {worst_minus, worst_plus};
}

} // namespace strsim
