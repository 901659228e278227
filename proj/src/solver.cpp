#include "strsim/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace strsim {

const char* to_string(Termination t) {
    switch (t) {
        case Termination::ReachedT: return "ReachedT";
        case Termination::HorizonViolation: return "HorizonViolation";
        case Termination::TimelikeLost: return "TimelikeLost";
        case Termination::GapCollapse: return "GapCollapse";
        case Termination::NumericalFailure: return "NumericalFailure";
    }
    return "Unknown";
}

namespace {

struct FieldArrays {
    std::vector<Vec4> S, P, Q;
};

// Sample a field at fractional node position x; out-of-range positions
// resolve to the ghost states.
Vec4 sample_at(const std::vector<Vec4>& f, double x, GridParams::FootInterp interp,
               const Vec4& ghost_left, const Vec4& ghost_right) {
    const int n = static_cast<int>(f.size());
    if (x <= -1.0) return ghost_left;
    if (x >= static_cast<double>(n)) return ghost_right;

    const double xr = std::round(x);
    if (std::abs(x - xr) < 1e-9) {
        const int j = static_cast<int>(xr);
        if (j < 0) return ghost_left;
        if (j >= n) return ghost_right;
        return f[static_cast<std::size_t>(j)];
    }

    auto at = [&](int j) -> const Vec4& {
        if (j < 0) return ghost_left;
        if (j >= n) return ghost_right;
        return f[static_cast<std::size_t>(j)];
    };

    const int j0 = static_cast<int>(std::floor(x));
    const double t = x - static_cast<double>(j0);
    if (interp == GridParams::FootInterp::Linear)
        return (1.0 - t) * at(j0) + t * at(j0 + 1);

    const double tm = t + 1.0, t0 = t, t1 = t - 1.0, t2 = t - 2.0;
    const double c0 = -t0 * t1 * t2 / 6.0;
    const double c1 = tm * t1 * t2 / 2.0;
    const double c2 = -tm * t0 * t2 / 2.0;
    const double c3 = tm * t0 * t1 / 6.0;
    return c0 * at(j0 - 1) + c1 * at(j0) + c2 * at(j0 + 1) + c3 * at(j0 + 2);
}

double linf(const Vec4& a) { return a.cwiseAbs().maxCoeff(); }

} // namespace

SolveResult solve_characteristic(const InitialData& data, double m, const GridParams& grid,
                                 const SolverParams& sp) {
    require_exterior_margin(data, m, sp.delta_hat);
    const LambdaInitial lambda0 = lambda0_from_data(data, m);
    const AssumptionReport assumptions = check_assumptions(lambda0);
    if (!assumptions.pass() && !sp.allow_assumption_violations) {
        std::ostringstream msg;
        msg << "admissibility check failed:";
        if (!assumptions.h1) msg << " [h1: speeds not finite]";
        if (!assumptions.h2) msg << " [h2: gap " << assumptions.kappa << " <= 0]";
        if (!assumptions.h3)
            msg << " [h3: ordering violated, witness theta1 = " << assumptions.witness_theta1
                << " theta2 = " << assumptions.witness_theta2 << "]";
        throw AssumptionViolated(msg.str());
    }
    const CoordinateMap map = CoordinateMap::build(lambda0);

    SolveResult res;
    res.chart = "cartesian-characteristic";
    res.mass = m;
    res.kappa = assumptions.kappa;
    res.delta_hat = sp.delta_hat;
    res.assumptions = assumptions;

    const int n = grid.nodes;
    if (n < 8) throw SimError("solver: need at least 8 nodes");
    const double T = sp.T;
    const double center = 0.5 * (map.vartheta_of_window_left() + map.vartheta_of_window_right());
    const double half0 =
        0.5 * (map.vartheta_of_window_right() - map.vartheta_of_window_left()) + T + grid.pad;
    const double h0 = 2.0 * half0 / static_cast<double>(n - 1);
    const int steps = T > 0.0 ? std::max(1, static_cast<int>(std::floor(T / (grid.cfl * h0)))) : 0;
    const double dtau = steps > 0 ? T / static_cast<double>(steps) : 0.0;
    const double h = steps > 0 ? dtau / grid.cfl : h0;
    const double vt0 = center - 0.5 * h * static_cast<double>(n - 1);
    res.grid_h = h;
    res.dt = dtau;
    res.steps = steps;

    const double gap_floor = sp.gap_floor_factor * std::max(assumptions.kappa, 0.0);
    const double horizon_floor = 2.0 * m + 0.5 * sp.delta_hat;

    FieldArrays f, pred;
    f.S.resize(n);
    f.P.resize(n);
    f.Q.resize(n);
    pred = f;
    std::vector<Vec4> fS(n), fPQ(n), fS1(n), fPQ1(n);
    std::vector<double> lamM(n), lamP(n), lamM1(n), lamP1(n);

    auto vt_at = [&](int i) { return vt0 + h * static_cast<double>(i); };

    for (int i = 0; i < n; ++i) {
        const double th = map.phi0(vt_at(i));
        const WorldSheetJet jet = data.jet_at(th);
        const double lm = lambda0.lambda_minus0.value(th);
        const double lp = lambda0.lambda_plus0.value(th);
        f.S[i] = jet.u;
        f.P[i] = jet.v + lm * jet.w;
        f.Q[i] = jet.v + lp * jet.w;
    }
    // far-field ghost states: the constant-extension tails evolve as plain ODEs
    const double far = data.window + 1.0;
    Vec4 gS[2], gP[2], gQ[2];
    double glM[2], glP[2];
    for (int side = 0; side < 2; ++side) {
        const double th = side == 0 ? -far : far;
        const WorldSheetJet jet = data.jet_at(th);
        glM[side] = lambda0.lambda_minus0.value(th);
        glP[side] = lambda0.lambda_plus0.value(th);
        gS[side] = jet.u;
        gP[side] = jet.v + glM[side] * jet.w;
        gQ[side] = jet.v + glP[side] * jet.w;
    }

    auto fill_lambda = [&](double tau, std::vector<double>& lm_row, std::vector<double>& lp_row) {
        for (int i = 0; i < n; ++i) {
            const auto [a, b] = map.lambda_tilde(tau, vt_at(i));
            lm_row[i] = a;
            lp_row[i] = b;
        }
    };
    fill_lambda(0.0, lamM, lamP);

    RunningMonitors& mon = res.monitors;
    mon.min_s_minus_2m = std::numeric_limits<double>::infinity();
    mon.max_delta = -std::numeric_limits<double>::infinity();
    mon.min_gap = std::numeric_limits<double>::infinity();

    const int center_idx = std::clamp(static_cast<int>(std::round((0.0 - vt0) / h)), 0, n - 1);
    const Vec4 s_ref = f.S[center_idx];

    std::vector<std::array<double, 4>> vbar_p(n, std::array<double, 4>{});
    std::vector<std::array<double, 4>> vbar_q(n, std::array<double, 4>{});

    const int nlines = 17;
    std::vector<double> line_alpha(nlines);
    for (int k = 0; k < nlines; ++k)
        line_alpha[k] = map.vartheta_of_window_left() +
                        (map.vartheta_of_window_right() - map.vartheta_of_window_left()) *
                            static_cast<double>(k) / static_cast<double>(nlines - 1);
    std::vector<std::array<double, 4>> line_p(nlines, std::array<double, 4>{});
    std::vector<std::array<double, 4>> line_q(nlines, std::array<double, 4>{});

    double qv_level = 0.0; // h * sum_i (sum_mu |P|)(sum_nu |Q|) at the current level

    auto scan_state = [&](double tau, bool is_initial) -> bool {
        std::array<double, 4> ip{}, iq{};
        double vinf = 0.0;
        double qv_integrand = 0.0;
        for (int i = 0; i < n; ++i) {
            const Vec4& S = f.S[i];
            const Vec4& P = f.P[i];
            const Vec4& Q = f.Q[i];
            if (!S.allFinite() || !P.allFinite() || !Q.allFinite()) {
                res.termination = Termination::NumericalFailure;
                return false;
            }
            vinf = std::max({vinf, linf(P), linf(Q)});
            double sp_abs = 0.0, sq_abs = 0.0;
            const double wgt = (i == 0 || i == n - 1) ? 0.5 : 1.0;
            for (int c = 0; c < 4; ++c) {
                ip[c] += wgt * std::abs(P(c));
                iq[c] += wgt * std::abs(Q(c));
                sp_abs += std::abs(P(c));
                sq_abs += std::abs(Q(c));
            }
            qv_integrand += wgt * sp_abs * sq_abs;

            const double gap = lamP[i] - lamM[i];
            mon.min_gap = std::min(mon.min_gap, gap);
            if (gap < gap_floor) {
                res.termination = Termination::GapCollapse;
                return false;
            }
            if (m > 0.0) {
                const double r = S.tail<3>().norm();
                mon.min_s_minus_2m = std::min(mon.min_s_minus_2m, r - 2.0 * m);
                if (r <= horizon_floor) {
                    res.termination = Termination::HorizonViolation;
                    return false;
                }
            }
            CharacteristicState cs{S, P, Q};
            const WorldSheetJet jet = from_characteristic(cs, lamM[i], lamP[i]);
            InducedMetric2 g;
            try {
                g = induced_metric_cartesian(jet, m);
            } catch (const HorizonViolation&) {
                res.termination = Termination::HorizonViolation;
                return false;
            }
            mon.max_delta = std::max(mon.max_delta, g.delta);
            if (!(g.delta < 0.0)) {
                res.termination = Termination::TimelikeLost;
                return false;
            }
            try {
                const auto [la, lb] = characteristic_speeds(g);
                mon.lambda_consistency =
                    std::max(mon.lambda_consistency,
                             std::max(std::abs(la - lamM[i]), std::abs(lb - lamP[i])));
            } catch (const SimError&) {
            }
            for (int c = 0; c < 4; ++c) {
                mon.s_drift_sup = std::max(mon.s_drift_sup, std::abs(S(c) - s_ref(c)));
                vbar_p[i][c] += dtau * std::abs(P(c));
                vbar_q[i][c] += dtau * std::abs(Q(c));
            }
            mon.s_drift_spatial =
                std::max(mon.s_drift_spatial, (S.tail<3>() - s_ref.tail<3>()).norm());
        }

        mon.vinf_max = std::max(mon.vinf_max, vinf);
        double v1_here = 0.0;
        for (int c = 0; c < 4; ++c) v1_here = std::max({v1_here, ip[c] * h, iq[c] * h});
        mon.v1_max = std::max(mon.v1_max, v1_here);
        if (is_initial) {
            mon.vinf_0 = vinf;
            mon.v1_0 = v1_here;
        }
        qv_level = qv_integrand * h;

        for (int k = 0; k < nlines; ++k) {
            const double pos_m = (line_alpha[k] - tau - vt0) / h;
            const double pos_p = (line_alpha[k] + tau - vt0) / h;
            const Vec4 pv = sample_at(f.P, pos_m, GridParams::FootInterp::Linear, gP[0], gP[1]);
            const Vec4 qv = sample_at(f.Q, pos_p, GridParams::FootInterp::Linear, gQ[0], gQ[1]);
            for (int c = 0; c < 4; ++c) {
                line_p[k][c] += dtau * std::abs(pv(c));
                line_q[k][c] += dtau * std::abs(qv(c));
            }
        }
        return true;
    };

    auto make_snapshot = [&](double tau) {
        Snapshot snap;
        snap.t = tau;
        snap.vartheta.resize(n);
        snap.theta.resize(n);
        snap.jets.resize(n);
        snap.lambda_minus.resize(n);
        snap.lambda_plus.resize(n);
        snap.delta.resize(n);
        snap.horizon_gap.resize(n);
        for (int i = 0; i < n; ++i) {
            snap.vartheta[i] = vt_at(i);
            snap.theta[i] = map.phi(tau, vt_at(i));
            snap.lambda_minus[i] = lamM[i];
            snap.lambda_plus[i] = lamP[i];
            try {
                CharacteristicState cs{f.S[i], f.P[i], f.Q[i]};
                snap.jets[i] = from_characteristic(cs, lamM[i], lamP[i]);
                const InducedMetric2 g = induced_metric_cartesian(snap.jets[i], m);
                snap.delta[i] = g.delta;
            } catch (const SimError&) {
                snap.jets[i].u = f.S[i];
                snap.delta[i] = std::numeric_limits<double>::quiet_NaN();
            }
            snap.horizon_gap[i] = m > 0.0 ? f.S[i].tail<3>().norm() - 2.0 * m : 0.0;
        }
        res.snapshots.push_back(std::move(snap));
    };

    if (!scan_state(0.0, true)) {
        res.t_end = 0.0;
        make_snapshot(0.0);
        return res;
    }
    double qv_prev = qv_level;
    make_snapshot(0.0);

    const double shift_p = -grid.cfl;
    const double shift_q = grid.cfl;

    double tau = 0.0;
    for (int step = 0; step < steps; ++step) {
        const double tau1 = dtau * static_cast<double>(step + 1);
        fill_lambda(tau1, lamM1, lamP1);

        bool source_ok = true;
        for (int i = 0; i < n && source_ok; ++i) {
            CharacteristicState cs{f.S[i], f.P[i], f.Q[i]};
            try {
                const SourceTerms st = characteristic_rhs(cs, lamM[i], lamP[i], m);
                fS[i] = st.s_rhs;
                fPQ[i] = st.pq_rhs;
            } catch (const HorizonViolation&) {
                source_ok = false;
            }
        }
        if (!source_ok) {
            res.termination = Termination::HorizonViolation;
            res.t_end = tau;
            make_snapshot(tau);
            return res;
        }
        Vec4 gfS[2], gfPQ[2];
        for (int side = 0; side < 2; ++side) {
            CharacteristicState cs{gS[side], gP[side], gQ[side]};
            const SourceTerms st = characteristic_rhs(cs, glM[side], glP[side], m);
            gfS[side] = st.s_rhs;
            gfPQ[side] = st.pq_rhs;
        }

        for (int i = 0; i < n; ++i) {
            const double xp = static_cast<double>(i) + shift_p;
            const double xq = static_cast<double>(i) + shift_q;
            const Vec4 pfoot = sample_at(f.P, xp, grid.interp, gP[0], gP[1]);
            const Vec4 pfsrc = sample_at(fPQ, xp, grid.interp, gfPQ[0], gfPQ[1]);
            const Vec4 qfoot = sample_at(f.Q, xq, grid.interp, gQ[0], gQ[1]);
            const Vec4 qfsrc = sample_at(fPQ, xq, grid.interp, gfPQ[0], gfPQ[1]);
            pred.P[i] = pfoot + dtau * pfsrc;
            pred.Q[i] = qfoot + dtau * qfsrc;
            pred.S[i] = f.S[i] + dtau * fS[i];
        }
        Vec4 gS1[2], gP1[2], gQ1[2];
        for (int side = 0; side < 2; ++side) {
            gS1[side] = gS[side] + dtau * gfS[side];
            gP1[side] = gP[side] + dtau * gfPQ[side];
            gQ1[side] = gQ[side] + dtau * gfPQ[side];
        }

        for (int i = 0; i < n && source_ok; ++i) {
            CharacteristicState cs{pred.S[i], pred.P[i], pred.Q[i]};
            try {
                const SourceTerms st = characteristic_rhs(cs, lamM1[i], lamP1[i], m);
                fS1[i] = st.s_rhs;
                fPQ1[i] = st.pq_rhs;
            } catch (const HorizonViolation&) {
                source_ok = false;
            }
        }
        if (!source_ok) {
            res.termination = Termination::HorizonViolation;
            res.t_end = tau;
            make_snapshot(tau);
            return res;
        }
        Vec4 gfS1[2], gfPQ1[2];
        for (int side = 0; side < 2; ++side) {
            CharacteristicState cs{gS1[side], gP1[side], gQ1[side]};
            const SourceTerms st = characteristic_rhs(cs, glM[side], glP[side], m);
            gfS1[side] = st.s_rhs;
            gfPQ1[side] = st.pq_rhs;
        }

        for (int i = 0; i < n; ++i) {
            const double xp = static_cast<double>(i) + shift_p;
            const double xq = static_cast<double>(i) + shift_q;
            const Vec4 pfoot = sample_at(f.P, xp, grid.interp, gP[0], gP[1]);
            const Vec4 pfsrc = sample_at(fPQ, xp, grid.interp, gfPQ[0], gfPQ[1]);
            const Vec4 qfoot = sample_at(f.Q, xq, grid.interp, gQ[0], gQ[1]);
            const Vec4 qfsrc = sample_at(fPQ, xq, grid.interp, gfPQ[0], gfPQ[1]);
            pred.P[i] = pfoot + 0.5 * dtau * (pfsrc + fPQ1[i]);
            pred.Q[i] = qfoot + 0.5 * dtau * (qfsrc + fPQ1[i]);
            pred.S[i] = f.S[i] + 0.5 * dtau * (fS[i] + fS1[i]);
        }
        std::swap(f.S, pred.S);
        std::swap(f.P, pred.P);
        std::swap(f.Q, pred.Q);
        for (int side = 0; side < 2; ++side) {
            gS[side] += 0.5 * dtau * (gfS[side] + gfS1[side]);
            gP[side] += 0.5 * dtau * (gfPQ[side] + gfPQ1[side]);
            gQ[side] += 0.5 * dtau * (gfPQ[side] + gfPQ1[side]);
        }

        lamM.swap(lamM1);
        lamP.swap(lamP1);
        tau = tau1;

        if (!scan_state(tau, false)) {
            res.t_end = tau;
            make_snapshot(tau);
            return res;
        }
        mon.qv += 0.5 * dtau * (qv_prev + qv_level);
        qv_prev = qv_level;

        const bool last = step + 1 == steps;
        if (last || (sp.snapshot_stride > 0 && (step + 1) % sp.snapshot_stride == 0))
            make_snapshot(tau);
    }

    for (int k = 0; k < nlines; ++k)
        for (int c = 0; c < 4; ++c)
            mon.vtilde1_max = std::max({mon.vtilde1_max, line_p[k][c], line_q[k][c]});
    for (int i = 0; i < n; ++i)
        for (int c = 0; c < 4; ++c)
            mon.v1bar_max = std::max({mon.v1bar_max, vbar_p[i][c], vbar_q[i][c]});

    res.termination = Termination::ReachedT;
    res.t_end = tau;
    return res;
}

SolveResult solve_upwind_raw(const InitialData& data, double m, const GridParams& grid,
                             const SolverParams& sp) {
    require_exterior_margin(data, m, sp.delta_hat);
    const LambdaInitial lambda0 = lambda0_from_data(data, m);
    const AssumptionReport assumptions = check_assumptions(lambda0);
    if (!assumptions.pass() && !sp.allow_assumption_violations)
        throw AssumptionViolated("admissibility check failed (raw upwind path)");

    SolveResult res;
    res.chart = "cartesian-upwind";
    res.mass = m;
    res.kappa = assumptions.kappa;
    res.delta_hat = sp.delta_hat;
    res.assumptions = assumptions;

    const int n = grid.nodes;
    if (n < 8) throw SimError("solver: need at least 8 nodes");
    const double L = data.window;
    const double h = 2.0 * L / static_cast<double>(n - 1);
    res.grid_h = h;

    const double gap_floor = sp.gap_floor_factor * std::max(assumptions.kappa, 0.0);
    const double horizon_floor = 2.0 * m + 0.5 * sp.delta_hat;

    std::vector<WorldSheetJet> U(n), Unew(n);
    for (int i = 0; i < n; ++i) U[i] = data.jet_at(-L + h * i);

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
        snap.jets = U;
        snap.lambda_minus.resize(n);
        snap.lambda_plus.resize(n);
        snap.delta.resize(n);
        snap.horizon_gap.resize(n);
        for (int i = 0; i < n; ++i) {
            snap.theta[i] = -L + h * i;
            snap.vartheta[i] = snap.theta[i];
            try {
                const InducedMetric2 g = induced_metric_cartesian(U[i], m);
                snap.delta[i] = g.delta;
                const auto [a, b] = characteristic_speeds(g);
                snap.lambda_minus[i] = a;
                snap.lambda_plus[i] = b;
            } catch (const SimError&) {
                snap.delta[i] = std::numeric_limits<double>::quiet_NaN();
            }
            snap.horizon_gap[i] = m > 0.0 ? U[i].u.tail<3>().norm() - 2.0 * m : 0.0;
        }
        res.snapshots.push_back(std::move(snap));
    };

    double t = 0.0;
    int step = 0;
    make_snapshot(0.0);
    while (t < sp.T - 1e-14) {
        // speeds and constraint scan
        double maxspeed = 0.0;
        double vinf = 0.0;
        for (int i = 0; i < n; ++i) {
            if (!U[i].packed().allFinite()) {
                res.termination = Termination::NumericalFailure;
                res.t_end = t;
                make_snapshot(t);
                return res;
            }
            InducedMetric2 g;
            try {
                g = induced_metric_cartesian(U[i], m);
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
                const double r = U[i].u.tail<3>().norm();
                mon.min_s_minus_2m = std::min(mon.min_s_minus_2m, r - 2.0 * m);
                if (r <= horizon_floor) {
                    res.termination = Termination::HorizonViolation;
                    res.t_end = t;
                    make_snapshot(t);
                    return res;
                }
            }
            vinf = std::max({vinf, linf(U[i].v + lm[i] * U[i].w), linf(U[i].v + lp[i] * U[i].w)});
        }
        mon.vinf_max = std::max(mon.vinf_max, vinf);
        if (step == 0) mon.vinf_0 = vinf;

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

            // local characteristic variables with coefficients frozen at node i
            auto pvar = [&](int j) { return Vec4(U[j].v + lm[i] * U[j].w); };
            auto qvar = [&](int j) { return Vec4(U[j].v + lp[i] * U[j].w); };

            const Vec4 dP = lp[i] > 0.0 ? Vec4((pvar(i) - pvar(il)) / h)
                                        : Vec4((pvar(ir) - pvar(i)) / h);
            const Vec4 dQ = lm[i] > 0.0 ? Vec4((qvar(i) - qvar(il)) / h)
                                        : Vec4((qvar(ir) - qvar(i)) / h);

            CharacteristicState cs{U[i].u, pvar(i), qvar(i)};
            const SourceTerms st = characteristic_rhs(cs, lm[i], lp[i], m);

            const Vec4 Pn = pvar(i) - dt * lp[i] * dP + dt * st.pq_rhs;
            const Vec4 Qn = qvar(i) - dt * lm[i] * dQ + dt * st.pq_rhs;
            Unew[i].u = U[i].u + dt * U[i].v;
            Unew[i].v = (lp[i] * Pn - lm[i] * Qn) / gap;
            Unew[i].w = (Qn - Pn) / gap;
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

DalembertOracle::DalembertOracle(const InitialData& data, double gauge_tol) : data_(data) {
    const auto& ref = data.p[0];
    for (std::size_t j = 0; j < ref.size(); ++j) {
        const double th = ref.x_min() + ref.spacing() * static_cast<double>(j);
        const WorldSheetJet jet = data.jet_at(th);
        const InducedMetric2 g = induced_metric_cartesian(jet, 0.0);
        const double scale = std::abs(g.g00) + std::abs(g.g11) + 1e-300;
        if (std::abs(g.g01) > gauge_tol * scale || std::abs(g.g00 + g.g11) > gauge_tol * scale) {
            std::ostringstream msg;
            msg << "orthonormal gauge violated at theta = " << th << " (g01 = " << g.g01
                << ", g00+g11 = " << g.g00 + g.g11 << ")";
            throw GaugeViolation(msg.str());
        }
    }
}

Vec4 DalembertOracle::operator()(double t, double theta) const {
    Vec4 x;
    for (int c = 0; c < 4; ++c) {
        x(c) = 0.5 * (data_.p[c].value(theta + t) + data_.p[c].value(theta - t)) +
               0.5 * data_.q[c].integral(theta - t, theta + t);
    }
    return x;
}

LambdaFieldResult integrate_transport_reference(const LambdaInitial& init, double T, int nodes,
                                                int time_samples, double window, double cfl) {
    LambdaFieldResult out;
    const int n = nodes;
    const double h = 2.0 * window / static_cast<double>(n - 1);
    out.theta.resize(n);
    std::vector<double> a(n), b(n);
    for (int i = 0; i < n; ++i) {
        out.theta[i] = -window + h * i;
        a[i] = init.lambda_minus0.value(out.theta[i]);
        b[i] = init.lambda_plus0.value(out.theta[i]);
    }

    double maxspeed = 1e-12;
    for (int i = 0; i < n; ++i) maxspeed = std::max({maxspeed, std::abs(a[i]), std::abs(b[i])});

    const int substeps_per_sample = std::max(
        1, static_cast<int>(std::ceil((T / static_cast<double>(time_samples - 1)) /
                                      (cfl * h / maxspeed))));
    const double dt = T / static_cast<double>((time_samples - 1) * substeps_per_sample);

    // d lambda_minus / dt = -lambda_plus * d lambda_minus / dtheta, and dually
    auto rhs = [&](const std::vector<double>& am, const std::vector<double>& bp,
                   std::vector<double>& ra, std::vector<double>& rb) {
        auto deriv = [&](const std::vector<double>& ff, int i) {
            if (i == 0) return (-3.0 * ff[0] + 4.0 * ff[1] - ff[2]) / (2.0 * h);
            if (i == n - 1) return (3.0 * ff[n - 1] - 4.0 * ff[n - 2] + ff[n - 3]) / (2.0 * h);
            return (ff[i + 1] - ff[i - 1]) / (2.0 * h);
        };
        for (int i = 0; i < n; ++i) {
            ra[i] = -bp[i] * deriv(am, i);
            rb[i] = -am[i] * deriv(bp, i);
        }
    };

    std::vector<double> k1a(n), k1b(n), s1a(n), s1b(n), s2a(n), s2b(n);
    auto rk3_step = [&](std::vector<double>& am, std::vector<double>& bp) {
        rhs(am, bp, k1a, k1b);
        for (int i = 0; i < n; ++i) {
            s1a[i] = am[i] + dt * k1a[i];
            s1b[i] = bp[i] + dt * k1b[i];
        }
        rhs(s1a, s1b, k1a, k1b);
        for (int i = 0; i < n; ++i) {
            s2a[i] = 0.75 * am[i] + 0.25 * (s1a[i] + dt * k1a[i]);
            s2b[i] = 0.75 * bp[i] + 0.25 * (s1b[i] + dt * k1b[i]);
        }
        rhs(s2a, s2b, k1a, k1b);
        for (int i = 0; i < n; ++i) {
            am[i] = am[i] / 3.0 + 2.0 / 3.0 * (s2a[i] + dt * k1a[i]);
            bp[i] = bp[i] / 3.0 + 2.0 / 3.0 * (s2b[i] + dt * k1b[i]);
        }
    };

    out.times.push_back(0.0);
    out.lambda_minus.push_back(a);
    out.lambda_plus.push_back(b);
    double t = 0.0;
    for (int s = 1; s < time_samples; ++s) {
        for (int k = 0; k < substeps_per_sample; ++k) {
            rk3_step(a, b);
            t += dt;
        }
        out.times.push_back(t);
        out.lambda_minus.push_back(a);
        out.lambda_plus.push_back(b);
    }
    return out;
}

Vec4 sample_position(const Snapshot& snap, double theta) {
    const auto& th = snap.theta;
    const int n = static_cast<int>(th.size());
    const auto it = std::upper_bound(th.begin(), th.end(), theta);
    int j = static_cast<int>(it - th.begin()) - 1;
    j = std::clamp(j, 1, n - 3); // center a 4-point stencil
    Vec4 acc = Vec4::Zero();
    for (int k = j - 1; k <= j + 2; ++k) {
        double c = 1.0;
        for (int l = j - 1; l <= j + 2; ++l)
            if (l != k) c *= (theta - th[l]) / (th[k] - th[l]);
        acc += c * snap.jets[k].u;
    }
    return acc;
}

bool DiagnosticsReport::all_pass() const {
    for (const auto& v : verdicts)
        if (v.applicable && !v.pass) return false;
    return true;
}

DiagnosticsReport estimate_monitors(const SolveResult& result, double epsilon) {
    DiagnosticsReport rep;
    rep.monitors = result.monitors;
    rep.termination = result.termination;
    const RunningMonitors& m = result.monitors;

    rep.verdicts.push_back({"completed", static_cast<double>(result.termination ==
                                                             Termination::ReachedT),
                            1.0, result.termination == Termination::ReachedT, true});
    rep.verdicts.push_back({"sup_norm_doubling", m.vinf_max, 2.0 * m.vinf_0 + 1e-14,
                            m.vinf_max <= 2.0 * m.vinf_0 + 1e-14, true});
    rep.verdicts.push_back({"l1_norm_doubling", m.v1_max, 2.0 * m.v1_0 + 1e-14,
                            m.v1_max <= 2.0 * m.v1_0 + 1e-14, true});
    const bool horizon_applicable = result.mass > 0.0;
    rep.verdicts.push_back({"horizon_margin", m.min_s_minus_2m, 0.5 * result.delta_hat,
                            !horizon_applicable || m.min_s_minus_2m >= 0.5 * result.delta_hat,
                            horizon_applicable});
    rep.verdicts.push_back({"timelike_throughout", m.max_delta, 0.0, m.max_delta < 0.0, true});
    rep.verdicts.push_back({"gap_preservation", m.min_gap, 0.0, m.min_gap > 0.0, true});

    if (epsilon > 0.0) {
        rep.k0 = m.v1_0 / epsilon;
        rep.ks = m.s_drift_sup / epsilon;
    }
    return rep;
}

} // namespace strsim
