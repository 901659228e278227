#include "strsim/spherical.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "strsim/numerics.hpp"

namespace strsim {

namespace {

double chart_factor(double r, double m) {
    if (r <= 0.0) throw SimError("spherical chart: r must be positive");
    if (m > 0.0 && r <= 2.0 * m * (1.0 + 1e-6))
        throw HorizonViolation("spherical chart: r inside r = 2m safety margin");
    return 1.0 - 2.0 * m / r;
}

} // namespace

InducedMetric2 induced_metric_spherical(const SphericalJet& jet, double m) {
    const double r = jet.r(), alpha = jet.alpha();
    const double f = chart_factor(r, m);
    const double s2 = std::sin(alpha) * std::sin(alpha);
    const double tt = jet.U(2), rt = jet.U(3), at = jet.U(4), bt = jet.U(5);
    const double th = jet.U(6), rh = jet.U(7), ah = jet.U(8), bh = jet.U(9);

    InducedMetric2 g;
    g.g00 = -f * tt * tt + rt * rt / f + r * r * at * at + r * r * s2 * bt * bt;
    g.g01 = -f * tt * th + rt * rh / f + r * r * at * ah + r * r * s2 * bt * bh;
    g.g11 = -f * th * th + rh * rh / f + r * r * ah * ah + r * r * s2 * bh * bh;
    g.delta = g.g00 * g.g11 - g.g01 * g.g01;
    return g;
}

double spherical_delta_expansion(const SphericalJet& jet, double m) {
    const double r = jet.r(), alpha = jet.alpha();
    const double f = chart_factor(r, m);
    const double s2 = std::sin(alpha) * std::sin(alpha);
    const double tt = jet.U(2), rt = jet.U(3), at = jet.U(4), bt = jet.U(5);
    const double th = jet.U(6), rh = jet.U(7), ah = jet.U(8), bh = jet.U(9);

    auto sq = [](double x) { return x * x; };
    return -f * r * r * s2 * sq(tt * bh - bt * th) - f * r * r * sq(tt * ah - at * th) -
           sq(tt * rh - rt * th) + r * r * s2 * sq(rt * bh - bt * rh) / f +
           r * r * sq(rt * ah - at * rh) / f + r * r * r * r * s2 * sq(at * bh - bt * ah);
}

SphericalSystem assemble_spherical(const SphericalJet& jet, double m, double polar_margin) {
    const double r = jet.r(), alpha = jet.alpha();
    const double sa = std::sin(alpha), ca = std::cos(alpha);
    if (std::abs(sa) < polar_margin)
        throw PolarSingularity("assemble_spherical: |sin alpha| below margin");
    const double f = chart_factor(r, m);
    const InducedMetric2 g = induced_metric_spherical(jet, m);
    if (!(g.delta < 0.0)) throw NotTimelike("assemble_spherical: det g >= 0");

    // contravariant components
    const double c00 = g.g11 / g.delta;
    const double c01 = -g.g01 / g.delta;
    const double c11 = g.g00 / g.delta;
    if (std::abs(c00) < 1e-12 * (std::abs(c01) + std::abs(c11) + 1.0))
        throw DegenerateG11("assemble_spherical: leading contravariant coefficient vanishes");

    SphericalSystem sys;
    const double a = 2.0 * c01 / c00;
    const double b = c11 / c00;
    for (int k = 0; k < 4; ++k) {
        sys.A(2 + k, 2 + k) = a;
        sys.A(2 + k, 6 + k) = b;
        sys.A(6 + k, 2 + k) = -1.0;
    }

    const double tt = jet.U(2), rt = jet.U(3), at = jet.U(4), bt = jet.U(5);
    const double th = jet.U(6), rh = jet.U(7), ah = jet.U(8), bh = jet.U(9);
    const double q01 = c01 / c00, q11 = c11 / c00;

    auto bilinear = [&](double xt, double xh, double yt, double yh) {
        return xt * yt + q01 * (xt * yh + xh * yt) + q11 * xh * yh;
    };

    sys.B(0) = -rt;
    sys.B(1) = -at;
    sys.B(2) = 2.0 * m / (r * r * f) * bilinear(tt, th, rt, rh);
    sys.B(3) = m / (r * r) * f * bilinear(tt, th, tt, th) -
               m / (r * r * f) * bilinear(rt, rh, rt, rh) -
               r * f * bilinear(at, ah, at, ah) - r * sa * sa * f * bilinear(bt, bh, bt, bh);
    sys.B(4) = 2.0 / r * bilinear(at, ah, rt, rh) - sa * ca * bilinear(bt, bh, bt, bh);
    sys.B(5) = 2.0 / r * bilinear(bt, bh, rt, rh) + 2.0 * ca / sa * bilinear(at, ah, bt, bh);
    return sys;
}

SphericalEigen spherical_eigen_structure(const InducedMetric2& g) {
    const auto [lm, lp] = characteristic_speeds(g);
    SphericalEigen es;
    es.lambda_minus = lm;
    es.lambda_plus = lp;
    for (int k = 0; k < 4; ++k) {
        // speed lambda_minus family
        es.right(2 + k, k) = -lm;
        es.right(6 + k, k) = 1.0;
        es.left(k, 2 + k) = 1.0;
        es.left(k, 6 + k) = lp;
        // speed lambda_plus family
        es.right(2 + k, 4 + k) = -lp;
        es.right(6 + k, 4 + k) = 1.0;
        es.left(4 + k, 2 + k) = 1.0;
        es.left(4 + k, 6 + k) = lm;
    }
    es.right(0, 8) = 1.0;
    es.right(1, 9) = 1.0;
    es.left(8, 0) = 1.0;
    es.left(9, 1) = 1.0;
    return es;
}

Vec10 to_spherical_riemann(const SphericalJet& jet, double lambda_minus, double lambda_plus) {
    Vec10 R;
    R(0) = jet.U(0);
    R(1) = jet.U(1);
    for (int k = 0; k < 4; ++k) {
        R(2 + k) = jet.U(2 + k) + lambda_minus * jet.U(6 + k);
        R(6 + k) = jet.U(2 + k) + lambda_plus * jet.U(6 + k);
    }
    return R;
}

SphericalJet from_spherical_riemann(const Vec10& R, double lambda_minus, double lambda_plus) {
    const double gap = lambda_plus - lambda_minus;
    if (std::abs(gap) < 1e-12 * (std::abs(lambda_plus) + std::abs(lambda_minus) + 1.0))
        throw CoincidentCharacteristics("from_spherical_riemann: speed gap below floor");
    SphericalJet jet;
    jet.U(0) = R(0);
    jet.U(1) = R(1);
    for (int k = 0; k < 4; ++k) {
        jet.U(6 + k) = (R(6 + k) - R(2 + k)) / gap;
        jet.U(2 + k) = (lambda_plus * R(2 + k) - lambda_minus * R(6 + k)) / gap;
    }
    return jet;
}

std::array<double, 6> spherical_riemann_sources(const Vec10& R, double lambda_minus,
                                                double lambda_plus, double m,
                                                double polar_margin) {
    const double r = R(0);
    const double sa = std::sin(R(1)), ca = std::cos(R(1));
    if (std::abs(sa) < polar_margin)
        throw PolarSingularity("spherical_riemann_sources: |sin alpha| below margin");
    if (m > 0.0 && r <= 2.0 * m * (1.0 + 1e-6))
        throw HorizonViolation("spherical_riemann_sources: r inside safety margin");

    std::array<double, 6> B{};
    B[0] = (lambda_plus * R(3) - lambda_minus * R(7)) / (lambda_minus - lambda_plus);
    B[1] = (lambda_plus * R(4) - lambda_minus * R(8)) / (lambda_minus - lambda_plus);
    B[2] = m * (R(2) * R(7) + R(3) * R(6)) / (r * (r - 2.0 * m));
    B[3] = (r - 2.0 * m) * (m * R(2) * R(6) / (r * r * r) -
                            m * R(3) * R(7) / (r * (r - 2.0 * m) * (r - 2.0 * m)) -
                            R(4) * R(8) - sa * sa * R(5) * R(9));
    B[4] = (R(3) * R(8) + R(4) * R(7)) / r - sa * ca * R(5) * R(9);
    B[5] = (R(3) * R(9) + R(5) * R(7)) / r + ca / sa * (R(4) * R(9) + R(5) * R(8));
    return B;
}

SphericalJet spherical_jet_from_cartesian(const WorldSheetJet& cart, double polar_margin) {
    const Vec3 x = cart.u.tail<3>();
    const double r = x.norm();
    if (r <= 0.0) throw SimError("chart map: spatial position at the origin");
    const double alpha = std::acos(std::clamp(x(2) / r, -1.0, 1.0));
    const double beta = std::atan2(x(1), x(0));
    const double sa = std::sin(alpha), ca = std::cos(alpha);
    if (std::abs(sa) < polar_margin)
        throw PolarSingularity("chart map: state on the polar axis");
    const double sb = std::sin(beta), cb = std::cos(beta);

    Eigen::Matrix3d J; // d(x,y,z)/d(r,alpha,beta)
    J << sa * cb, r * ca * cb, -r * sa * sb,
         sa * sb, r * ca * sb, r * sa * cb,
         ca, -r * sa, 0.0;
    const Eigen::Matrix3d Jinv = J.inverse();

    const Vec3 dtau = Jinv * cart.v.tail<3>();
    const Vec3 dth = Jinv * cart.w.tail<3>();

    SphericalJet jet;
    jet.U(0) = r;
    jet.U(1) = alpha;
    jet.U(2) = cart.v(0);
    jet.U(3) = dtau(0);
    jet.U(4) = dtau(1);
    jet.U(5) = dtau(2);
    jet.U(6) = cart.w(0);
    jet.U(7) = dth(0);
    jet.U(8) = dth(1);
    jet.U(9) = dth(2);
    return jet;
}

namespace {

// the state vector omits t and beta; the solver carries them alongside
struct TrackedNode {
    SphericalJet jet;
    double t = 0.0;
    double beta = 0.0;
};

WorldSheetJet to_cartesian(const TrackedNode& node) {
    const double r = node.jet.r(), alpha = node.jet.alpha(), beta = node.beta;
    const double sa = std::sin(alpha), ca = std::cos(alpha);
    const double sb = std::sin(beta), cb = std::cos(beta);

    Eigen::Matrix3d J;
    J << sa * cb, r * ca * cb, -r * sa * sb,
         sa * sb, r * ca * sb, r * sa * cb,
         ca, -r * sa, 0.0;

    WorldSheetJet cart;
    cart.u(0) = node.t;
    cart.u(1) = r * sa * cb;
    cart.u(2) = r * sa * sb;
    cart.u(3) = r * ca;
    cart.v(0) = node.jet.U(2);
    cart.v.tail<3>() = J * Vec3(node.jet.U(3), node.jet.U(4), node.jet.U(5));
    cart.w(0) = node.jet.U(6);
    cart.w.tail<3>() = J * Vec3(node.jet.U(7), node.jet.U(8), node.jet.U(9));
    return cart;
}

} // namespace

SolveResult solve_spherical_upwind(const InitialData& data, double m, const GridParams& grid,
                                   const SolverParams& sp, double polar_margin) {
    require_exterior_margin(data, m, sp.delta_hat);

    SolveResult res;
    res.chart = "spherical-upwind";
    res.mass = m;
    res.delta_hat = sp.delta_hat;

    const int n = grid.nodes;
    if (n < 8) throw SimError("solver: need at least 8 nodes");
    const double L = data.window;
    const double h = 2.0 * L / static_cast<double>(n - 1);
    res.grid_h = h;

    std::vector<TrackedNode> U(n), Unew(n);
    for (int i = 0; i < n; ++i) {
        const WorldSheetJet cart = data.jet_at(-L + h * i);
        U[i].jet = spherical_jet_from_cartesian(cart, polar_margin);
        U[i].t = cart.u(0);
        const Vec3 x = cart.u.tail<3>();
        U[i].beta = std::atan2(x(1), x(0));
    }

    double kappa = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        const InducedMetric2 g = induced_metric_spherical(U[i].jet, m);
        if (!(g.delta < 0.0)) throw NotTimelike("spherical data not time-like");
        const auto [a, b] = characteristic_speeds(g);
        kappa = std::min(kappa, b - a);
    }
    res.kappa = kappa;
    const double gap_floor = sp.gap_floor_factor * std::max(kappa, 0.0);
    const double horizon_floor = 2.0 * m + 0.5 * sp.delta_hat;

    RunningMonitors& mon = res.monitors;
    mon.min_s_minus_2m = std::numeric_limits<double>::infinity();
    mon.max_delta = -std::numeric_limits<double>::infinity();
    mon.min_gap = std::numeric_limits<double>::infinity();

    std::vector<double> lm(n), lp(n);

    auto make_snapshot = [&](double t) {
        Snapshot snap;
        snap.t = t;
        snap.vartheta.resize(n);
        snap.theta.resize(n);
        snap.jets.resize(n);
        snap.lambda_minus.assign(n, 0.0);
        snap.lambda_plus.assign(n, 0.0);
        snap.delta.resize(n);
        snap.horizon_gap.resize(n);
        for (int i = 0; i < n; ++i) {
            snap.theta[i] = -L + h * i;
            snap.vartheta[i] = snap.theta[i];
            snap.jets[i] = to_cartesian(U[i]);
            try {
                const InducedMetric2 g = induced_metric_spherical(U[i].jet, m);
                snap.delta[i] = g.delta;
                const auto [a, b] = characteristic_speeds(g);
                snap.lambda_minus[i] = a;
                snap.lambda_plus[i] = b;
            } catch (const SimError&) {
                snap.delta[i] = std::numeric_limits<double>::quiet_NaN();
            }
            snap.horizon_gap[i] = m > 0.0 ? U[i].jet.r() - 2.0 * m : 0.0;
        }
        res.snapshots.push_back(std::move(snap));
    };

    double t = 0.0;
    int step = 0;
    make_snapshot(0.0);
    while (t < sp.T - 1e-14) {
        double maxspeed = 0.0;
        for (int i = 0; i < n; ++i) {
            if (!U[i].jet.U.allFinite()) {
                res.termination = Termination::NumericalFailure;
                res.t_end = t;
                make_snapshot(t);
                return res;
            }
            if (std::abs(std::sin(U[i].jet.alpha())) < polar_margin)
                throw PolarSingularity("spherical leg crossed the polar margin");
            InducedMetric2 g;
            try {
                g = induced_metric_spherical(U[i].jet, m);
            } catch (const HorizonViolation&) {
                res.termination = Termination::HorizonViolation;
                res.t_end = t;
                make_snapshot(t);
                return res;
            }
            mon.max_delta = std::max(mon.max_delta, g.delta);
            if (!(g.delta < 0.0)) {
                res.termination = Termination::TimelikeLost;
                res.t_end = t;
                make_snapshot(t);
                return res;
            }
            const auto [a, b] = characteristic_speeds(g);
            lm[i] = a;
            lp[i] = b;
            mon.min_gap = std::min(mon.min_gap, b - a);
            if (b - a < gap_floor) {
                res.termination = Termination::GapCollapse;
                res.t_end = t;
                make_snapshot(t);
                return res;
            }
            maxspeed = std::max({maxspeed, std::abs(a), std::abs(b)});
            if (m > 0.0) {
                const double r = U[i].jet.r();
                mon.min_s_minus_2m = std::min(mon.min_s_minus_2m, r - 2.0 * m);
                if (r <= horizon_floor) {
                    res.termination = Termination::HorizonViolation;
                    res.t_end = t;
                    make_snapshot(t);
                    return res;
                }
            }
        }

        const double dt = std::min(grid.cfl * h / std::max(maxspeed, 1e-12), sp.T - t);
        if (!(dt > 1e-13 * std::max(1.0, sp.T))) {
            res.termination = Termination::NumericalFailure;
            res.t_end = t;
            make_snapshot(t);
            return res;
        }

        for (int i = 0; i < n; ++i) {
            const int il = std::max(i - 1, 0);
            const int ir = std::min(i + 1, n - 1);
            const double gap = lp[i] - lm[i];

            auto pvar = [&](int j, int k) { return U[j].jet.U(2 + k) + lm[i] * U[j].jet.U(6 + k); };
            auto qvar = [&](int j, int k) { return U[j].jet.U(2 + k) + lp[i] * U[j].jet.U(6 + k); };

            const SphericalSystem sys = assemble_spherical(U[i].jet, m, polar_margin);

            Unew[i] = U[i];
            Unew[i].jet.U(0) = U[i].jet.U(0) + dt * U[i].jet.U(3); // r
            Unew[i].jet.U(1) = U[i].jet.U(1) + dt * U[i].jet.U(4); // alpha
            Unew[i].t = U[i].t + dt * U[i].jet.U(2);
            Unew[i].beta = U[i].beta + dt * U[i].jet.U(5);

            for (int k = 0; k < 4; ++k) {
                const double dP = lp[i] > 0.0 ? (pvar(i, k) - pvar(il, k)) / h
                                              : (pvar(ir, k) - pvar(i, k)) / h;
                const double dQ = lm[i] > 0.0 ? (qvar(i, k) - qvar(il, k)) / h
                                              : (qvar(ir, k) - qvar(i, k)) / h;
                const double Pn = pvar(i, k) - dt * lp[i] * dP - dt * sys.B(2 + k);
                const double Qn = qvar(i, k) - dt * lm[i] * dQ - dt * sys.B(2 + k);
                Unew[i].jet.U(2 + k) = (lp[i] * Pn - lm[i] * Qn) / gap;
                Unew[i].jet.U(6 + k) = (Qn - Pn) / gap;
            }
        }
        std::swap(U, Unew);
        t += dt;
        ++step;
        if (sp.snapshot_stride > 0 && step % sp.snapshot_stride == 0 && t < sp.T - 1e-14)
            make_snapshot(t);
    }
    res.termination = Termination::ReachedT;
    res.t_end = t;
    res.steps = step;
    make_snapshot(t);
    return res;
}

double snapshot_deviation(const Snapshot& a, const Snapshot& b, double theta_lo, double theta_hi,
                          int samples) {
    double worst = 0.0;
    for (int k = 0; k < samples; ++k) {
        const double th =
            theta_lo + (theta_hi - theta_lo) * static_cast<double>(k) /
                           static_cast<double>(samples - 1);
        const Vec4 xa = sample_position(a, th);
        const Vec4 xb = sample_position(b, th);
        worst = std::max(worst, (xa - xb).cwiseAbs().maxCoeff());
    }
    return worst;
}

} // namespace strsim
