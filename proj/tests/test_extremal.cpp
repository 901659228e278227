#include <doctest.h>

#include <cmath>
#include <random>

#include "strsim/extremal.hpp"

using namespace strsim;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

ImmersionJet flat_jet_from_columns(const Vec4& x0, const Vec4& x1) {
    ImmersionJet jet;
    jet.n = 3;
    jet.p = 1;
    jet.position = VectorXd::Zero(4);
    jet.first = MatrixXd(4, 2);
    jet.first.col(0) = x0;
    jet.first.col(1) = x1;
    return jet;
}

// immersion (u0, u1) -> (u0, u1, f(u0 + u1), 0): a null-direction wave profile
ImmersionFn wave_immersion(double amp, double freq) {
    ImmersionFn fn;
    fn.n = 3;
    fn.p = 1;
    fn.jet_at = [amp, freq](const VectorXd& u) {
        const double s = u(0) + u(1);
        ImmersionJet jet;
        jet.n = 3;
        jet.p = 1;
        jet.position = VectorXd::Zero(4);
        jet.position << u(0), u(1), amp * std::sin(freq * s), 0.0;
        jet.first = MatrixXd::Zero(4, 2);
        jet.first(0, 0) = 1.0;
        jet.first(1, 1) = 1.0;
        jet.first(2, 0) = amp * freq * std::cos(freq * s);
        jet.first(2, 1) = amp * freq * std::cos(freq * s);
        jet.second.assign(4, VectorXd::Zero(4));
        const double curv = -amp * freq * freq * std::sin(freq * s);
        for (auto& v : jet.second) v.setZero();
        jet.second[0](2) = curv;
        jet.second[1](2) = curv;
        jet.second[2](2) = curv;
        jet.second[3](2) = curv;
        return jet;
    };
    return fn;
}

} // namespace

TEST_CASE("induced metric: flat orthonormal and boosted jets") {
    const AmbientMetric amb = minkowski_ambient(3);
    {
        const ImmersionJet jet =
            flat_jet_from_columns(Vec4(1, 0, 0, 0), Vec4(0, 1, 0, 0));
        const InducedMetricN ind = induced_metric(jet, amb.eval(jet.position));
        CHECK(ind.g(0, 0) == doctest::Approx(-1.0));
        CHECK(ind.g(1, 1) == doctest::Approx(1.0));
        CHECK(ind.g(0, 1) == 0.0);
        CHECK(ind.det == doctest::Approx(-1.0));
        CHECK(ind.timelike);
    }
    {
        const ImmersionJet jet =
            flat_jet_from_columns(Vec4(1, 0.5, 0, 0), Vec4(0, 1, 0, 0));
        const InducedMetricN ind = induced_metric(jet, amb.eval(jet.position));
        CHECK(ind.g(0, 0) == doctest::Approx(-0.75));
        CHECK(ind.g(0, 1) == doctest::Approx(0.5));
        CHECK(ind.g(1, 1) == doctest::Approx(1.0));
        CHECK(ind.det == doctest::Approx(-1.0));
    }
}

TEST_CASE("induced metric in the exterior field") {
    const AmbientMetric amb = ambient_from_field(MetricField::schwarzschild_cartesian(1.0));
    ImmersionJet jet = flat_jet_from_columns(Vec4(1, 0, 0, 0), Vec4(0, 0, 1, 0));
    jet.position << 0.0, 4.0, 0.0, 0.0;
    const InducedMetricN ind = induced_metric(jet, amb.eval(jet.position));
    CHECK(ind.g(0, 0) == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK(ind.g(1, 1) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(ind.det == doctest::Approx(-0.5).epsilon(1e-13));
}

TEST_CASE("tension vector: affine immersions and wave profiles are tension-free") {
    const AmbientMetric amb = minkowski_ambient(3);
    {
        ImmersionJet jet = flat_jet_from_columns(Vec4(1, 0.2, 0.1, 0), Vec4(0, 1, -0.3, 0.2));
        jet.second.assign(4, VectorXd::Zero(4));
        const InducedMetricN ind = induced_metric(jet, amb.eval(jet.position));
        const VectorXd e = tension_vector(jet, amb.eval(jet.position), ind);
        CHECK(e.cwiseAbs().maxCoeff() == 0.0);
    }
    {
        const ImmersionFn fn = wave_immersion(0.4, 1.3);
        VectorXd u(2);
        u << 0.37, -0.81;
        const ImmersionJet jet = fn.jet_at(u);
        const MetricValueN mv = amb.eval(jet.position);
        const InducedMetricN ind = induced_metric(jet, mv);
        const VectorXd e = tension_vector(jet, mv, ind);
        CHECK(e.cwiseAbs().maxCoeff() < 1e-13);
    }
}

TEST_CASE("tension vector of a parabolic sheet") {
    // x = (u0, u1, u0^2, 0): only second derivative is x2_{00} = 2
    const AmbientMetric amb = minkowski_ambient(3);
    const double u0 = 0.3;
    ImmersionJet jet = flat_jet_from_columns(Vec4(1, 0, 2.0 * u0, 0), Vec4(0, 1, 0, 0));
    jet.second.assign(4, VectorXd::Zero(4));
    jet.second[0](2) = 2.0;
    const MetricValueN mv = amb.eval(jet.position);
    const InducedMetricN ind = induced_metric(jet, mv);
    const VectorXd e = tension_vector(jet, mv, ind);
    CHECK(e(2) == doctest::Approx(ind.ginv(0, 0) * 2.0).epsilon(1e-14));
    CHECK(std::abs(e(0)) < 1e-15);
}

TEST_CASE("Euler-Lagrange identity holds against differenced connection") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);

    // affine immersion: both sides vanish identically
    {
        ImmersionFn fn;
        fn.n = 3;
        fn.p = 1;
        MatrixXd lin(4, 2);
        lin << 1.3, 0.1, 0.2, 1.1, 0.0, 0.4, 0.1, 0.0;
        fn.jet_at = [lin](const VectorXd& u) {
            ImmersionJet jet;
            jet.n = 3;
            jet.p = 1;
            jet.position = lin * u;
            jet.first = lin;
            jet.second.assign(4, VectorXd::Zero(4));
            return jet;
        };
        const AmbientMetric amb = minkowski_ambient(3);
        VectorXd u(2);
        u << 0.4, -0.2;
        CHECK(euler_lagrange_residual(fn, amb, u, 1e-4) < 1e-12);
    }

    // wave immersion in the flat ambient: residual is pure differencing error
    {
        const ImmersionFn fn = wave_immersion(0.5, 1.1);
        const AmbientMetric amb = minkowski_ambient(3);
        VectorXd u(2);
        u << 0.3, 0.2;
        CHECK(euler_lagrange_residual(fn, amb, u, 1e-4) < 1e-8);
    }
}

TEST_CASE("projector spectrum: strings and membranes") {
    std::mt19937_64 rng(31);
    const AmbientMetric flat3 = minkowski_ambient(3);
    const AmbientMetric schw = ambient_from_field(MetricField::schwarzschild_cartesian(1.0));

    for (int k = 0; k < 300; ++k) {
        const ImmersionJet jet = random_timelike_jet(flat3, 1, rng);
        const MetricValueN mv = flat3.eval(jet.position);
        const InducedMetricN ind = induced_metric(jet, mv);
        const ProjectorSpectrum s = normal_projector_spectrum(jet, mv, ind);
        REQUIRE(s.eigenvalues.size() == 4);
        CHECK(s.rank == 2);
        CHECK(std::abs(s.eigenvalues[0]) < 1e-9);
        CHECK(std::abs(s.eigenvalues[1]) < 1e-9);
        CHECK(std::abs(s.eigenvalues[2] - 1.0) < 1e-9);
        CHECK(std::abs(s.eigenvalues[3] - 1.0) < 1e-9);
        CHECK(s.idempotency_gap < 1e-9);
    }
    for (int k = 0; k < 300; ++k) {
        const ImmersionJet jet = random_timelike_jet(schw, 2, rng);
        const MetricValueN mv = schw.eval(jet.position);
        const InducedMetricN ind = induced_metric(jet, mv);
        const ProjectorSpectrum s = normal_projector_spectrum(jet, mv, ind);
        CHECK(s.rank == 1);
        CHECK(std::abs(s.eigenvalues[0]) < 1e-9);
        CHECK(std::abs(s.eigenvalues[1]) < 1e-9);
        CHECK(std::abs(s.eigenvalues[2]) < 1e-9);
        CHECK(std::abs(s.eigenvalues[3] - 1.0) < 1e-9);
    }
}

TEST_CASE("orthonormal flat jet gives the diagonal projector exactly") {
    const AmbientMetric amb = minkowski_ambient(3);
    const ImmersionJet jet = flat_jet_from_columns(Vec4(1, 0, 0, 0), Vec4(0, 1, 0, 0));
    const MetricValueN mv = amb.eval(jet.position);
    const InducedMetricN ind = induced_metric(jet, mv);
    const ExtremalOperators ops = extremal_operators(jet, mv, ind);
    MatrixXd expected = MatrixXd::Zero(4, 4);
    expected(2, 2) = 1.0;
    expected(3, 3) = 1.0;
    CHECK((ops.M - expected).cwiseAbs().maxCoeff() == 0.0);
    CHECK((ops.M * ops.M - ops.M).cwiseAbs().maxCoeff() == 0.0);

    const auto [a, b] = annihilation_residuals(jet, mv, ind);
    CHECK(a == 0.0);
    CHECK(b == 0.0);
}

TEST_CASE("annihilation identities on random exterior jets") {
    std::mt19937_64 rng(43);
    const AmbientMetric schw = ambient_from_field(MetricField::schwarzschild_cartesian(1.0));
    for (int k = 0; k < 500; ++k) {
        const ImmersionJet jet = random_timelike_jet(schw, 1, rng);
        const MetricValueN mv = schw.eval(jet.position);
        const InducedMetricN ind = induced_metric(jet, mv);
        const auto [a, b] = annihilation_residuals(jet, mv, ind);
        CHECK(a < 1e-10);
        CHECK(b < 1e-10);
    }
}

TEST_CASE("five-dimensional flat ambient: projector spectrum for a string") {
    std::mt19937_64 rng(51);
    const AmbientMetric flat4 = minkowski_ambient(4);
    for (int k = 0; k < 200; ++k) {
        const ImmersionJet jet = random_timelike_jet(flat4, 1, rng);
        const MetricValueN mv = flat4.eval(jet.position);
        const InducedMetricN ind = induced_metric(jet, mv);
        const ProjectorSpectrum s = normal_projector_spectrum(jet, mv, ind);
        REQUIRE(s.eigenvalues.size() == 5);
        CHECK(s.rank == 3); // n - p = 4 - 1
        for (int i = 0; i < 2; ++i) CHECK(std::abs(s.eigenvalues[static_cast<std::size_t>(i)]) < 1e-9);
        for (int i = 2; i < 5; ++i)
            CHECK(std::abs(s.eigenvalues[static_cast<std::size_t>(i)] - 1.0) < 1e-9);
    }
}

TEST_CASE("zero tension set survives reparametrization") {
    // the wave immersion solves the equations; after an invertible parameter
    // change the projected tension M E must still vanish
    const double amp = 0.4, freq = 1.2;
    const ImmersionFn base = wave_immersion(amp, freq);
    const AmbientMetric amb = minkowski_ambient(3);

    // parameter change u = psi(s): u0 = s0 + 0.1 sin(s1), u1 = s1 + 0.1 cos(s0)
    auto reparam_jet = [&](const VectorXd& s) {
        VectorXd u(2);
        u << s(0) + 0.1 * std::sin(s(1)), s(1) + 0.1 * std::cos(s(0));
        MatrixXd dpsi(2, 2);
        dpsi << 1.0, 0.1 * std::cos(s(1)), -0.1 * std::sin(s(0)), 1.0;
        // second derivatives of psi
        double d2u0_s1s1 = -0.1 * std::sin(s(1));
        double d2u1_s0s0 = -0.1 * std::cos(s(0));

        const ImmersionJet inner = base.jet_at(u);
        ImmersionJet jet;
        jet.n = 3;
        jet.p = 1;
        jet.position = inner.position;
        jet.first = inner.first * dpsi;
        jet.second.assign(4, VectorXd::Zero(4));
        for (int mu = 0; mu < 2; ++mu)
            for (int nu = 0; nu < 2; ++nu) {
                VectorXd acc = VectorXd::Zero(4);
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < 2; ++b)
                        acc += inner.second[a * 2 + b] * dpsi(a, mu) * dpsi(b, nu);
                if (mu == 1 && nu == 1) acc += inner.first.col(0) * d2u0_s1s1;
                if (mu == 0 && nu == 0) acc += inner.first.col(1) * d2u1_s0s0;
                jet.second[mu * 2 + nu] = acc;
            }
        return jet;
    };

    VectorXd s(2);
    s << 0.23, -0.57;
    const ImmersionJet jet = reparam_jet(s);
    const MetricValueN mv = amb.eval(jet.position);
    const InducedMetricN ind = induced_metric(jet, mv);
    const ExtremalOperators ops = extremal_operators(jet, mv, ind);
    const VectorXd me = ops.M * ops.E;
    CHECK(me.cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("degenerate jets are rejected") {
    const AmbientMetric amb = minkowski_ambient(3);
    const ImmersionJet jet = flat_jet_from_columns(Vec4(1, 1, 0, 0), Vec4(1, 1, 0, 0));
    CHECK_THROWS_AS(induced_metric(jet, amb.eval(jet.position)), DegenerateMetric);
}
