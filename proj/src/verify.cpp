#include "strsim/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include "strsim/extremal.hpp"

namespace strsim {

WorldSheetJet random_string_state(std::mt19937_64& rng, double m) {
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (int attempt = 0; attempt < 100000; ++attempt) {
        WorldSheetJet jet;
        Vec3 dir(uni(rng), uni(rng), uni(rng));
        if (dir.norm() < 1e-2) continue;
        dir.normalize();
        const double radius = 3.5 + 4.5 * std::abs(uni(rng));
        jet.u(0) = uni(rng);
        jet.u.tail<3>() = radius * dir;
        jet.v(0) = 1.0 + 0.3 * uni(rng);
        jet.v.tail<3>() = 0.5 * Vec3(uni(rng), uni(rng), uni(rng));
        jet.w(0) = 0.3 * uni(rng);
        jet.w.tail<3>() = Vec3(uni(rng), uni(rng), uni(rng));
        if (jet.w.tail<3>().norm() < 0.3) continue;

        try {
            const InducedMetric2 g = induced_metric_cartesian(jet, m);
            if (!(g.delta < -0.02)) continue;
            if (std::abs(g.g11) < 0.05 || std::abs(g.g11) > 50.0) continue;
            const auto [lm, lp] = characteristic_speeds(g);
            if (std::abs(lm) > 10.0 || std::abs(lp) > 10.0) continue;
        } catch (const SimError&) {
            continue;
        }
        return jet;
    }
    throw SimError("random_string_state: sampling failed");
}

SphericalJet random_spherical_state(std::mt19937_64& rng, double m) {
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (int attempt = 0; attempt < 100000; ++attempt) {
        SphericalJet jet;
        jet.U(0) = 3.5 + 4.5 * std::abs(uni(rng));          // r
        jet.U(1) = 0.6 + (3.14159265358979 - 1.2) * 0.5 * (uni(rng) + 1.0); // alpha
        jet.U(2) = 1.0 + 0.3 * uni(rng);                    // t_tau
        for (int k = 3; k < 6; ++k) jet.U(k) = 0.3 * uni(rng);
        for (int k = 6; k < 10; ++k) jet.U(k) = 0.4 * uni(rng);
        if (jet.U.tail<4>().norm() < 0.2) continue;

        try {
            const InducedMetric2 g = induced_metric_spherical(jet, m);
            if (!(g.delta < -0.02)) continue;
            if (std::abs(g.g11) < 0.05 || std::abs(g.g11) > 200.0) continue;
            const auto [lm, lp] = characteristic_speeds(g);
            if (std::abs(lm) > 10.0 || std::abs(lp) > 10.0) continue;
        } catch (const SimError&) {
            continue;
        }
        return jet;
    }
    throw SimError("random_spherical_state: sampling failed");
}

namespace {

using SuiteFn = std::function<SuiteResult(const SuiteOptions&)>;

// quadratic immersion with analytic jets, kept inside the exterior region
ImmersionFn make_test_immersion(std::mt19937_64& rng, int n, int p, double amp) {
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    Eigen::VectorXd base = Eigen::VectorXd::Zero(n + 1);
    Eigen::VectorXd dir = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) dir(i) = uni(rng);
    dir.normalize();
    base.tail(n) = (5.0 + uni(rng)) * dir;
    base(0) = uni(rng);

    Eigen::MatrixXd lin(n + 1, p + 1);
    for (int c = 0; c <= n; ++c)
        for (int mu = 0; mu <= p; ++mu) lin(c, mu) = uni(rng);
    lin(0, 0) += 1.5;

    std::vector<Eigen::MatrixXd> quad(n + 1, Eigen::MatrixXd::Zero(p + 1, p + 1));
    for (int c = 0; c <= n; ++c) {
        for (int mu = 0; mu <= p; ++mu)
            for (int nu = mu; nu <= p; ++nu) {
                const double v = amp * uni(rng);
                quad[c](mu, nu) = v;
                quad[c](nu, mu) = v;
            }
    }

    ImmersionFn fn;
    fn.n = n;
    fn.p = p;
    fn.jet_at = [=](const Eigen::VectorXd& u) {
        ImmersionJet jet;
        jet.n = n;
        jet.p = p;
        jet.position = base + lin * u;
        for (int c = 0; c <= n; ++c) jet.position(c) += 0.5 * u.dot(quad[c] * u);
        jet.first = lin;
        for (int c = 0; c <= n; ++c) jet.first.row(c) += (quad[c] * u).transpose();
        jet.second.assign((p + 1) * (p + 1), Eigen::VectorXd::Zero(n + 1));
        for (int mu = 0; mu <= p; ++mu)
            for (int nu = 0; nu <= p; ++nu)
                for (int c = 0; c <= n; ++c) jet.second[mu * (p + 1) + nu](c) = quad[c](mu, nu);
        return jet;
    };
    return fn;
}

LambdaInitial make_tanh_lambda(int samples = 4096, double window = 25.0) {
    std::vector<double> lm(samples), lp(samples);
    const double h = 2.0 * window / (samples - 1);
    for (int j = 0; j < samples; ++j) {
        const double th = -window + h * j;
        lm[j] = -1.0 + 0.2 * std::tanh(th) + 0.05 * std::tanh(th - 4.0);
        lp[j] = 1.0 + 0.15 * std::tanh(th + 2.0);
    }
    LambdaInitial init;
    init.window = window;
    init.lambda_minus0 = UniformSpline(-window, h, std::move(lm));
    init.lambda_plus0 = UniformSpline(-window, h, std::move(lp));
    double kappa = 1e300;
    for (int j = 0; j < samples; ++j) {
        const double th = -window + h * j;
        kappa = std::min(kappa, init.lambda_plus0.value(th) - init.lambda_minus0.value(th));
    }
    init.kappa = kappa;
    return init;
}

SuiteResult suite_projector_spectrum(const SuiteOptions& opt) {
    std::mt19937_64 rng(opt.seed);
    SuiteResult res{"projector-spectrum", true, 0.0, 1e-9, ""};
    struct Cfg {
        int n, p;
        bool schwarzschild;
    };
    const Cfg cfgs[] = {{3, 1, false}, {3, 1, true}, {3, 2, false}, {3, 2, true}, {4, 1, false}};
    const int per = std::max(1, opt.count / 5);
    for (const Cfg& cfg : cfgs) {
        const AmbientMetric ambient =
            cfg.schwarzschild ? ambient_from_field(MetricField::schwarzschild_cartesian(1.0))
                              : minkowski_ambient(cfg.n);
        for (int k = 0; k < per; ++k) {
            const ImmersionJet jet = random_timelike_jet(ambient, cfg.p, rng);
            const MetricValueN mv = ambient.eval(jet.position);
            const InducedMetricN ind = induced_metric(jet, mv);
            const ProjectorSpectrum spec = normal_projector_spectrum(jet, mv, ind);
            double worst = spec.max_imag;
            int near_one = 0;
            for (double ev : spec.eigenvalues) {
                worst = std::max(worst, std::min(std::abs(ev), std::abs(ev - 1.0)));
                if (ev > 0.5) ++near_one;
            }
            res.measured = std::max(res.measured, worst);
            if (near_one != cfg.n - cfg.p || spec.rank != cfg.n - cfg.p) {
                res.pass = false;
                res.note = "rank mismatch";
            }
        }
    }
    res.pass = res.pass && res.measured <= res.limit;
    return res;
}

SuiteResult suite_euler_lagrange(const SuiteOptions& opt) {
    std::mt19937_64 rng(opt.seed + 1);
    SuiteResult res{"euler-lagrange-identity", true, 0.0, 1e-7, ""};
    const int total = std::min(opt.count, 1000);
    const double h = 1e-4;
    std::vector<double> ratios;
    for (int k = 0; k < total; ++k) {
        const bool flat = k % 2 == 0;
        const int p = k % 4 < 2 ? 1 : 2;
        const AmbientMetric ambient =
            flat ? minkowski_ambient(3) : ambient_from_field(MetricField::schwarzschild_cartesian(1.0));
        const ImmersionFn fn = make_test_immersion(rng, 3, p, 0.3);
        Eigen::VectorXd u = Eigen::VectorXd::Zero(p + 1);
        const ImmersionJet jet = fn.jet_at(u);
        const MetricValueN mv = ambient.eval(jet.position);
        InducedMetricN ind;
        try {
            ind = induced_metric(jet, mv);
        } catch (const SimError&) {
            --k;
            continue;
        }
        if (!ind.timelike) {
            --k;
            continue;
        }
        const double r1 = euler_lagrange_residual(fn, ambient, u, h);
        res.measured = std::max(res.measured, r1);
        if (k % 16 == 0) {
            const double r2 = euler_lagrange_residual(fn, ambient, u, 2.0 * h);
            if (r1 > 1e-12) ratios.push_back(r2 / r1);
        }
    }
    if (!ratios.empty()) {
        std::nth_element(ratios.begin(), ratios.begin() + ratios.size() / 2, ratios.end());
        const double med = ratios[ratios.size() / 2];
        if (med < 2.5 || med > 6.5) {
            res.pass = false;
            res.note = "refinement ratio " + std::to_string(med) + " not second order";
        }
    }
    res.pass = res.pass && res.measured <= res.limit;
    return res;
}

SuiteResult suite_annihilation(const SuiteOptions& opt) {
    std::mt19937_64 rng(opt.seed + 2);
    SuiteResult res{"annihilation", true, 0.0, 1e-10, ""};
    struct Cfg {
        int n, p;
        bool schwarzschild;
    };
    const Cfg cfgs[] = {{3, 1, false}, {3, 1, true}, {3, 2, true}, {4, 1, false}};
    const int per = std::max(1, opt.count / 4);
    for (const Cfg& cfg : cfgs) {
        const AmbientMetric ambient =
            cfg.schwarzschild ? ambient_from_field(MetricField::schwarzschild_cartesian(1.0))
                              : minkowski_ambient(cfg.n);
        for (int k = 0; k < per; ++k) {
            const ImmersionJet jet = random_timelike_jet(ambient, cfg.p, rng);
            const MetricValueN mv = ambient.eval(jet.position);
            const InducedMetricN ind = induced_metric(jet, mv);
            const auto [a, b] = annihilation_residuals(jet, mv, ind);
            res.measured = std::max({res.measured, a, b});
        }
    }
    res.pass = res.measured <= res.limit;
    return res;
}

SuiteResult suite_system_spectrum(const SuiteOptions& opt) {
    std::mt19937_64 rng(opt.seed + 3);
    SuiteResult res{"system-spectrum", true, 0.0, 1e-10, ""};
    const int total = std::min(opt.count, 2000);
    for (int k = 0; k < total; ++k) {
        const double m = k % 2 == 0 ? 1.0 : 0.0;
        const WorldSheetJet jet = random_string_state(rng, m);
        const SystemMatrices sys = assemble_system(jet, m);
        const auto [lm, lp] = characteristic_speeds(induced_metric_cartesian(jet, m));

        Eigen::EigenSolver<Eigen::MatrixXd> es(sys.A);
        std::vector<double> got(12);
        double imag = 0.0;
        for (int i = 0; i < 12; ++i) {
            got[static_cast<std::size_t>(i)] = es.eigenvalues()(i).real();
            imag = std::max(imag, std::abs(es.eigenvalues()(i).imag()));
        }
        std::sort(got.begin(), got.end());
        std::vector<double> want;
        for (int i = 0; i < 4; ++i) want.push_back(lm);
        for (int i = 0; i < 4; ++i) want.push_back(0.0);
        for (int i = 0; i < 4; ++i) want.push_back(lp);
        std::sort(want.begin(), want.end());
        const double scale = std::max({1.0, std::abs(lm), std::abs(lp)});
        double worst = imag;
        for (int i = 0; i < 12; ++i)
            worst = std::max(worst, std::abs(got[static_cast<std::size_t>(i)] -
                                             want[static_cast<std::size_t>(i)]));
        res.measured = std::max(res.measured, worst / scale);
    }
    res.pass = res.measured <= res.limit;
    return res;
}

SuiteResult suite_linear_degeneracy(const SuiteOptions& opt) {
    std::mt19937_64 rng(opt.seed + 4);
    SuiteResult res{"linear-degeneracy", true, 0.0, 1e-7, ""};
    const int total = opt.count;
    for (int k = 0; k < total; ++k) {
        const double m = k % 2 == 0 ? 1.0 : 0.5;
        const WorldSheetJet jet = random_string_state(rng, m);
        const InducedMetric2 g = induced_metric_cartesian(jet, m);
        const EigenStructure es = eigen_structure(g);
        const Vec12 U = jet.packed();
        const double delta = 1e-4 * (1.0 + U.cwiseAbs().maxCoeff());

        auto lambda_of = [&](const Vec12& state, bool plus) {
            const WorldSheetJet j = WorldSheetJet::unpack(state);
            const auto [a, b] = characteristic_speeds(induced_metric_cartesian(j, m));
            return plus ? b : a;
        };

        bool ok = true;
        for (int grp = 0; grp < 2 && ok; ++grp) {
            const bool plus = grp == 1;
            for (int i = 0; i < 4 && ok; ++i) {
                Vec12 dir = es.right.col((plus ? 8 : 4) + i);
                dir.normalize();
                double d;
                try {
                    d = (lambda_of(U + delta * dir, plus) - lambda_of(U - delta * dir, plus)) /
                        (2.0 * delta);
                } catch (const SimError&) {
                    ok = false;
                    break;
                }
                res.measured = std::max(res.measured, std::abs(d));
            }
        }
        if (!ok) {
            --k;
            continue;
        }
    }
    res.pass = res.measured <= res.limit;
    return res;
}

SuiteResult suite_source_consistency(const SuiteOptions& opt) {
    std::mt19937_64 rng(opt.seed + 5);
    SuiteResult res{"source-consistency", true, 0.0, 1e-9, ""};
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    const int total = std::min(opt.count, 3000);
    for (int k = 0; k < total; ++k) {
        const double m = k % 3 == 0 ? 0.0 : 1.0;
        const WorldSheetJet jet = random_string_state(rng, m);
        Vec4 v_theta, w_theta;
        for (int c = 0; c < 4; ++c) {
            v_theta(c) = uni(rng);
            w_theta(c) = uni(rng);
        }
        const SystemMatrices sys = assemble_system(jet, m);
        Vec12 U_theta;
        U_theta << jet.w, v_theta, w_theta; // u_theta = w by definition
        const Vec12 U_t = -(sys.A * U_theta) - sys.B;
        const Vec4 v_t_system = U_t.segment<4>(4);
        const Vec4 v_t_direct = second_order_acceleration(jet, v_theta, w_theta, m);
        const double scale =
            1.0 + v_t_direct.cwiseAbs().maxCoeff() + v_t_system.cwiseAbs().maxCoeff();
        res.measured =
            std::max(res.measured, (v_t_system - v_t_direct).cwiseAbs().maxCoeff() / scale);
    }
    res.pass = res.measured <= res.limit;
    return res;
}

SuiteResult suite_characteristic_source(const SuiteOptions& opt) {
    std::mt19937_64 rng(opt.seed + 6);
    SuiteResult res{"characteristic-source-consistency", true, 0.0, 1e-11, ""};
    const bool mutate = opt.mutation == "pq-source-sign";
    if (mutate) testhooks::source_mutation = testhooks::SourceMutation::FlipRadialTerm;
    const int total = std::min(opt.count, 3000);
    for (int k = 0; k < total; ++k) {
        const double m = k % 3 == 0 ? 0.0 : 1.0;
        const WorldSheetJet jet = random_string_state(rng, m);
        const CharacteristicDecomposition cd = to_characteristic(jet, m);
        const SourceTerms st =
            characteristic_rhs(cd.state, cd.lambda_minus, cd.lambda_plus, m);
        const SystemMatrices sys = assemble_system(jet, m);
        const Vec4 expected_pq = -sys.B.segment<4>(4);
        const double scale = 1.0 + expected_pq.cwiseAbs().maxCoeff();
        res.measured =
            std::max(res.measured, (st.pq_rhs - expected_pq).cwiseAbs().maxCoeff() / scale);
        res.measured = std::max(res.measured, (st.s_rhs - jet.v).cwiseAbs().maxCoeff() /
                                                  (1.0 + jet.v.cwiseAbs().maxCoeff()));
    }
    if (mutate) testhooks::source_mutation = testhooks::SourceMutation::None;
    res.pass = res.measured <= res.limit;
    if (mutate) res.note = "mutation active: failure expected";
    return res;
}

SuiteResult suite_transport_exactness(const SuiteOptions&) {
    SuiteResult res{"transport-exactness", true, 0.0, 0.0, ""};
    const LambdaInitial init = make_tanh_lambda();
    const CoordinateMap map = CoordinateMap::build(init);
    const double T = 4.0, W = 12.0;

    auto compare = [&](int nodes) {
        const int nt = 33;
        const LambdaFieldResult ref =
            integrate_transport_reference(init, T, nodes, nt, W, 0.4);
        double worst = 0.0;
        for (int s = 0; s < nt; ++s)
            for (int j = 0; j < nodes; ++j) {
                const auto [lm, lp] = map.lambda_at(ref.times[s], ref.theta[j]);
                worst = std::max({worst, std::abs(lm - ref.lambda_minus[s][j]),
                                  std::abs(lp - ref.lambda_plus[s][j])});
            }
        return worst;
    };

    const double e1 = compare(201);
    const double e2 = compare(401);
    res.measured = e2;
    res.limit = e1; // refinement must shrink the deviation
    const double ratio = e1 / std::max(e2, 1e-300);
    if (ratio < 2.5) {
        res.pass = false;
        res.note = "refinement ratio " + std::to_string(ratio) + " below second order";
    }
    return res;
}

SuiteResult suite_conservation(const SuiteOptions&) {
    SuiteResult res{"conservation-identity", true, 0.0, 0.0, ""};
    const LambdaInitial init = make_tanh_lambda();
    const CoordinateMap map = CoordinateMap::build(init);
    const double T = 3.0, W = 10.0;

    auto residual = [&](int nodes) {
        const int nt = nodes / 8;
        std::vector<std::vector<double>> lm(nt, std::vector<double>(nodes));
        std::vector<std::vector<double>> lp(nt, std::vector<double>(nodes));
        const double dt = T / (nt - 1);
        const double dx = 2.0 * W / (nodes - 1);
        for (int s = 0; s < nt; ++s)
            for (int j = 0; j < nodes; ++j) {
                const auto [a, b] = map.lambda_at(dt * s, -W + dx * j);
                lm[s][j] = a;
                lp[s][j] = b;
            }
        return conservation_residual(lm, lp, dt, dx);
    };

    const double r1 = residual(160);
    const double r2 = residual(320);
    res.measured = r2;
    res.limit = r1;
    const double ratio = r1 / std::max(r2, 1e-300);
    if (ratio < 3.4 || ratio > 4.6) {
        res.pass = false;
        res.note = "refinement ratio " + std::to_string(ratio) + " outside 4 +- 15%";
    }
    return res;
}

SuiteResult suite_map_roundtrip(const SuiteOptions& opt) {
    std::mt19937_64 rng(opt.seed + 7);
    SuiteResult res{"map-roundtrip", true, 0.0, 0.0, ""};
    std::uniform_real_distribution<double> uni(-1.0, 1.0);

    for (double eps : {1e-2, 5e-3}) {
        EpsilonFamilySpec spec;
        spec.epsilon = eps;
        spec.qhat_amp = {0.4, 0.2, 0.1};
        spec.samples = 2049;
        const InitialData data = make_epsilon_family(spec);
        const LambdaInitial init = lambda0_from_data(data, 1.0);
        const CoordinateMap map = CoordinateMap::build(init);
        const double h = 2.0 * spec.window / (spec.samples - 1);
        res.limit = std::max(res.limit, 5.0 * h * h);

        for (int k = 0; k < 200; ++k) {
            const double t = 2.5 * (uni(rng) + 1.0);
            const double th = spec.window * 0.8 * uni(rng);
            const double vt = map.theta_map(t, th);
            res.measured = std::max(res.measured, std::abs(map.phi(t, vt) - th));
            if (!(map.jacobian(t, th) > 0.0)) {
                res.pass = false;
                res.note = "nonpositive jacobian";
            }
        }
        // foot points: transporting along the fast family lands at
        // phi0(theta_map - t); along the slow family at phi0(theta_map + t)
        for (int k = 0; k < 12; ++k) {
            const double t_star = 1.0 + 1.5 * std::abs(uni(rng));
            const double th_star = spec.window * 0.5 * uni(rng);
            for (int fam = 0; fam < 2; ++fam) {
                const bool plus = fam == 0;
                double th = th_star;
                const int nsteps = 4000;
                const double dt = -t_star / nsteps;
                double t = t_star;
                for (int s = 0; s < nsteps; ++s) { // backward transport, classical RK4
                    auto speed = [&](double tt, double xx) {
                        const auto [a, b] = map.lambda_at(std::max(tt, 0.0), xx);
                        return plus ? b : a;
                    };
                    const double k1 = speed(t, th);
                    const double k2 = speed(t + 0.5 * dt, th + 0.5 * dt * k1);
                    const double k3 = speed(t + 0.5 * dt, th + 0.5 * dt * k2);
                    const double k4 = speed(t + dt, th + dt * k3);
                    th += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
                    t += dt;
                }
                const double vt_star = map.theta_map(t_star, th_star);
                const double expected = map.phi0(plus ? vt_star - t_star : vt_star + t_star);
                const double err = std::abs(th - expected);
                if (err > 1e-6) {
                    res.pass = false;
                    res.note = "characteristic foot mismatch " + std::to_string(err);
                }
            }
        }
    }
    res.pass = res.pass && res.measured <= res.limit;
    return res;
}

SuiteResult suite_bv_preservation(const SuiteOptions&) {
    SuiteResult res{"bv-preservation", true, 0.0, 1e-4, ""};
    const LambdaInitial init = make_tanh_lambda();
    const CoordinateMap map = CoordinateMap::build(init);
    const double t = 2.0, W = 10.0;
    const int n = 6000;

    std::vector<double> in_theta(n), in_vt(n);
    for (int j = 0; j < n; ++j) {
        const double th = -W + 2.0 * W * j / (n - 1);
        in_theta[j] = map.lambda_at(t, th).first;
        // the same field sampled uniformly in the straightened coordinate
        const double vt_lo = map.theta_map(t, -W), vt_hi = map.theta_map(t, W);
        const double vt = vt_lo + (vt_hi - vt_lo) * j / (n - 1);
        in_vt[j] = map.lambda_tilde(t, vt).first;
    }
    const double a = bv_norm(in_theta);
    const double b = bv_norm(in_vt);
    res.measured = std::abs(a - b) / std::max(a, 1e-300);
    res.pass = res.measured <= res.limit;
    return res;
}

SuiteResult suite_spherical_spectrum(const SuiteOptions& opt) {
    std::mt19937_64 rng(opt.seed + 8);
    SuiteResult res{"spherical-spectrum", true, 0.0, 1e-10, ""};
    const int total = std::min(opt.count, 2000);
    for (int k = 0; k < total; ++k) {
        const double m = k % 2 == 0 ? 1.0 : 0.0;
        const SphericalJet jet = random_spherical_state(rng, m);
        const InducedMetric2 g = induced_metric_spherical(jet, m);
        const auto [lm, lp] = characteristic_speeds(g);
        const SphericalSystem sys = assemble_spherical(jet, m);

        // determinant expansion agrees with g00 g11 - g01^2
        const double dexp = spherical_delta_expansion(jet, m);
        const double dscale = std::abs(g.delta) + 1.0;
        res.measured = std::max(res.measured, std::abs(dexp - g.delta) / dscale);

        Eigen::EigenSolver<Eigen::MatrixXd> es(sys.A);
        std::vector<double> got(10);
        double imag = 0.0;
        for (int i = 0; i < 10; ++i) {
            got[static_cast<std::size_t>(i)] = es.eigenvalues()(i).real();
            imag = std::max(imag, std::abs(es.eigenvalues()(i).imag()));
        }
        std::sort(got.begin(), got.end());
        std::vector<double> want;
        for (int i = 0; i < 4; ++i) want.push_back(lm);
        for (int i = 0; i < 4; ++i) want.push_back(lp);
        want.push_back(0.0);
        want.push_back(0.0);
        std::sort(want.begin(), want.end());
        const double scale = std::max({1.0, std::abs(lm), std::abs(lp)});
        double worst = imag;
        for (int i = 0; i < 10; ++i)
            worst = std::max(worst, std::abs(got[static_cast<std::size_t>(i)] -
                                             want[static_cast<std::size_t>(i)]));
        res.measured = std::max(res.measured, worst / scale);
    }
    res.pass = res.measured <= res.limit;
    return res;
}

SuiteResult suite_spherical_degeneracy(const SuiteOptions& opt) {
    std::mt19937_64 rng(opt.seed + 9);
    SuiteResult res{"spherical-degeneracy", true, 0.0, 1e-7, ""};
    const int total = opt.count;
    for (int k = 0; k < total; ++k) {
        const double m = k % 2 == 0 ? 1.0 : 0.5;
        const SphericalJet jet = random_spherical_state(rng, m);
        const InducedMetric2 g = induced_metric_spherical(jet, m);
        const SphericalEigen es = spherical_eigen_structure(g);
        const double delta = 1e-4 * (1.0 + jet.U.cwiseAbs().maxCoeff());

        auto lambda_of = [&](const Vec10& state, bool plus) {
            SphericalJet j;
            j.U = state;
            const auto [a, b] = characteristic_speeds(induced_metric_spherical(j, m));
            return plus ? b : a;
        };

        bool ok = true;
        for (int grp = 0; grp < 2 && ok; ++grp) {
            const bool plus = grp == 1; // lambda_plus family sits in columns 4..7
            for (int i = 0; i < 4 && ok; ++i) {
                Vec10 dir = es.right.col((plus ? 4 : 0) + i);
                dir.normalize();
                double d;
                try {
                    d = (lambda_of(jet.U + delta * dir, plus) -
                         lambda_of(jet.U - delta * dir, plus)) /
                        (2.0 * delta);
                } catch (const SimError&) {
                    ok = false;
                    break;
                }
                res.measured = std::max(res.measured, std::abs(d));
            }
        }
        if (!ok) {
            --k;
            continue;
        }
    }
    res.pass = res.measured <= res.limit;
    return res;
}

SuiteResult suite_spherical_roundtrip(const SuiteOptions& opt) {
    std::mt19937_64 rng(opt.seed + 10);
    SuiteResult res{"spherical-riemann-roundtrip", true, 0.0, 1e-12, ""};
    const int total = std::min(opt.count, 5000);
    for (int k = 0; k < total; ++k) {
        const SphericalJet jet = random_spherical_state(rng, 1.0);
        const auto [lm, lp] = characteristic_speeds(induced_metric_spherical(jet, 1.0));
        const Vec10 R = to_spherical_riemann(jet, lm, lp);
        const SphericalJet back = from_spherical_riemann(R, lm, lp);
        const double scale = 1.0 + jet.U.cwiseAbs().maxCoeff();
        res.measured = std::max(res.measured, (back.U - jet.U).cwiseAbs().maxCoeff() / scale);
    }
    res.pass = res.measured <= res.limit;
    return res;
}

SuiteResult suite_spherical_sources(const SuiteOptions& opt) {
    std::mt19937_64 rng(opt.seed + 11);
    SuiteResult res{"spherical-source-substitution", true, 0.0, 1e-10, ""};
    const int total = std::min(opt.count, 3000);
    for (int k = 0; k < total; ++k) {
        const double m = k % 2 == 0 ? 1.0 : 0.5;
        const SphericalJet jet = random_spherical_state(rng, m);
        const auto [lm, lp] = characteristic_speeds(induced_metric_spherical(jet, m));
        const Vec10 R = to_spherical_riemann(jet, lm, lp);
        const auto B = spherical_riemann_sources(R, lm, lp, m);
        const SphericalSystem sys = assemble_spherical(jet, m);
        for (int i = 0; i < 6; ++i) {
            const double scale = 1.0 + std::abs(sys.B(i));
            res.measured = std::max(
                res.measured, std::abs(B[static_cast<std::size_t>(i)] - sys.B(i)) / scale);
        }
    }
    res.pass = res.measured <= res.limit;
    return res;
}

SuiteResult suite_flat_limit(const SuiteOptions& opt) {
    std::mt19937_64 rng(opt.seed + 12);
    SuiteResult res{"flat-limit", true, 0.0, 1e-13, ""};
    const int total = std::min(opt.count, 3000);
    for (int k = 0; k < total; ++k) {
        const WorldSheetJet jet = random_string_state(rng, 0.0);
        const SystemMatrices sys = assemble_system(jet, 0.0);
        res.measured = std::max(res.measured, sys.B.segment<8>(4).cwiseAbs().maxCoeff());
        const CharacteristicDecomposition cd = to_characteristic(jet, 0.0);
        const SourceTerms st = characteristic_rhs(cd.state, cd.lambda_minus, cd.lambda_plus, 0.0);
        res.measured = std::max(res.measured, st.pq_rhs.cwiseAbs().maxCoeff());
    }
    res.pass = res.measured <= res.limit;
    return res;
}

const std::map<std::string, SuiteFn>& suite_registry() {
    static const std::map<std::string, SuiteFn> reg = {
        {"projector-spectrum", suite_projector_spectrum},
        {"euler-lagrange-identity", suite_euler_lagrange},
        {"annihilation", suite_annihilation},
        {"system-spectrum", suite_system_spectrum},
        {"linear-degeneracy", suite_linear_degeneracy},
        {"source-consistency", suite_source_consistency},
        {"characteristic-source-consistency", suite_characteristic_source},
        {"transport-exactness", suite_transport_exactness},
        {"conservation-identity", suite_conservation},
        {"map-roundtrip", suite_map_roundtrip},
        {"bv-preservation", suite_bv_preservation},
        {"spherical-spectrum", suite_spherical_spectrum},
        {"spherical-degeneracy", suite_spherical_degeneracy},
        {"spherical-riemann-roundtrip", suite_spherical_roundtrip},
        {"spherical-source-substitution", suite_spherical_sources},
        {"flat-limit", suite_flat_limit},
    };
    return reg;
}

} // namespace

const std::vector<std::string>& all_suite_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& [name, fn] : suite_registry()) out.push_back(name);
        return out;
    }();
    return names;
}

std::vector<SuiteResult> run_verification(const std::vector<std::string>& names,
                                          const SuiteOptions& opt) {
    std::vector<SuiteResult> out;
    const auto& reg = suite_registry();
    if (names.empty()) {
        for (const auto& [name, fn] : reg) out.push_back(fn(opt));
        return out;
    }
    for (const auto& name : names) {
        const auto it = reg.find(name);
        if (it == reg.end()) throw ConfigError("verify: unknown suite '" + name + "'");
        out.push_back(it->second(opt));
    }
    return out;
}

} // namespace strsim
