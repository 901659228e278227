#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <vector>

#include "strsim/initial_data.hpp"

using namespace strsim;

namespace {

constexpr double kPi = 3.14159265358979323846;

// flat orthonormal data: straight string along x1 with a clock velocity
InitialData straight_string(double window = 10.0, int samples = 801) {
    std::vector<double> p0(samples, 0.0), p1(samples), p2(samples, 0.0), p3(samples, 0.0);
    std::vector<double> q0(samples, 1.0), qz(samples, 0.0);
    std::vector<double> d0(samples, 0.0), d1(samples, 1.0), dz(samples, 0.0);
    const double h = 2.0 * window / (samples - 1);
    for (int j = 0; j < samples; ++j) p1[static_cast<std::size_t>(j)] = -window + h * j;
    InitialData data;
    data.window = window;
    data.p = {UniformSpline(-window, h, p0), UniformSpline(-window, h, p1),
              UniformSpline(-window, h, p2), UniformSpline(-window, h, p3)};
    data.q = {UniformSpline(-window, h, q0), UniformSpline(-window, h, qz),
              UniformSpline(-window, h, qz), UniformSpline(-window, h, qz)};
    data.p_theta = {UniformSpline(-window, h, d0), UniformSpline(-window, h, d1),
                    UniformSpline(-window, h, dz), UniformSpline(-window, h, dz)};
    return data;
}

} // namespace

TEST_CASE("family profile satisfies the unit-speed normalization") {
    EpsilonFamilySpec spec;
    spec.epsilon = 1e-2;
    spec.samples = 2001;
    const InitialData data = make_epsilon_family(spec);
    const auto& ref = data.p[0];
    for (std::size_t j = 0; j < ref.size(); j += 7) {
        const double th = ref.x_min() + ref.spacing() * static_cast<double>(j);
        double norm2 = 0.0;
        for (int c = 1; c < 4; ++c) {
            const double d = data.p_theta[c].value(th) / spec.epsilon;
            norm2 += d * d;
        }
        CHECK(norm2 == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("flat orthonormal data has unit speeds") {
    const InitialData data = straight_string();
    const LambdaInitial init = lambda0_from_data(data, 0.0);
    for (double th = -8.0; th <= 8.0; th += 0.7) {
        CHECK(init.lambda_minus0.value(th) == doctest::Approx(-1.0).epsilon(1e-13));
        CHECK(init.lambda_plus0.value(th) == doctest::Approx(1.0).epsilon(1e-13));
    }
    CHECK(init.kappa == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("unit-q0 family: speeds straddle zero and discriminant dominates") {
    EpsilonFamilySpec spec;
    spec.epsilon = 1e-2;
    spec.q0_mode = EpsilonFamilySpec::Q0Mode::Unit;
    spec.samples = 2001;
    const InitialData data = make_epsilon_family(spec);
    const LambdaInitial init = lambda0_from_data(data, 1.0);
    const auto& ref = data.p[0];
    for (std::size_t j = 0; j < ref.size(); j += 5) {
        const double th = ref.x_min() + ref.spacing() * static_cast<double>(j);
        CHECK(init.lambda_plus0.value(th) > 0.0);
        CHECK(init.lambda_minus0.value(th) < 0.0);

        const WorldSheetJet jet = data.jet_at(th);
        const InducedMetric2 g = induced_metric_cartesian(jet, 1.0);
        CHECK(std::sqrt(g.g01 * g.g01 - g.g00 * g.g11) > std::abs(g.g01));
    }
}

TEST_CASE("unit-q0 family: leading-order speed asymptotics") {
    EpsilonFamilySpec spec;
    spec.epsilon = 1e-2;
    spec.q0_mode = EpsilonFamilySpec::Q0Mode::Unit;
    spec.samples = 4001;
    const InitialData data = make_epsilon_family(spec);
    const LambdaInitial init = lambda0_from_data(data, 1.0);
    // g00 ~ -0.8, g11 ~ eps^2 (1 + 0.25 cos^2 theta) for pbar = (0,10,0,0)
    for (double th = -20.0; th <= 20.0; th += 1.1) {
        const double g11 = spec.epsilon * spec.epsilon *
                           (1.0 + 0.25 * std::cos(th) * std::cos(th));
        const double expected = std::sqrt(0.8 / g11);
        CHECK(init.lambda_plus0.value(th) == doctest::Approx(expected).epsilon(0.03));
        CHECK(init.lambda_minus0.value(th) == doctest::Approx(-expected).epsilon(0.03));
    }
}

TEST_CASE("scaled-q0 family: order-one speeds and admissibility") {
    EpsilonFamilySpec spec;
    spec.epsilon = 1e-3;
    spec.q0_mode = EpsilonFamilySpec::Q0Mode::Scaled;
    spec.samples = 2001;
    const InitialData data = make_epsilon_family(spec);
    const LambdaInitial init = lambda0_from_data(data, 1.0);
    const AssumptionReport rep = check_assumptions(init);
    CHECK(rep.pass());
    CHECK(rep.kappa > 1.5);
    CHECK(rep.kappa < 2.0);
}

TEST_CASE("smallness norms: Gaussian velocity integrates to eps sqrt(pi)") {
    EpsilonFamilySpec spec;
    spec.epsilon = 1e-2;
    spec.window = 8.0;
    spec.samples = 4097;
    spec.qhat_amp = {1.0, 0.0, 0.0};
    spec.qhat_width = 1.0;
    const InitialData data = make_epsilon_family(spec);
    const SmallnessNorms norms = smallness_norms(data);
    CHECK(std::abs(norms.vel_l1_raw[1] - spec.epsilon * std::sqrt(kPi)) < 1e-10);
    // the time component background is flagged in scaled mode only when nonzero
    CHECK(norms.vel_l1_dev[1] == doctest::Approx(norms.vel_l1_raw[1]).epsilon(1e-9));
}

TEST_CASE("smallness norms: constant position has zero arc variation") {
    InitialData data = straight_string();
    // overwrite the position derivative with zero profiles: constant string
    const auto& ref = data.p[0];
    std::vector<double> z(ref.size(), 0.0);
    for (int c = 0; c < 4; ++c)
        data.p_theta[static_cast<std::size_t>(c)] =
            UniformSpline(ref.x_min(), ref.spacing(), z);
    const SmallnessNorms norms = smallness_norms(data);
    CHECK(norms.arc_bv_max == doctest::Approx(0.0));
}

TEST_CASE("unit-q0 family flags the velocity background discrepancy") {
    EpsilonFamilySpec spec;
    spec.epsilon = 1e-2;
    spec.q0_mode = EpsilonFamilySpec::Q0Mode::Unit;
    spec.samples = 1001;
    const InitialData data = make_epsilon_family(spec);
    const SmallnessNorms norms = smallness_norms(data);
    CHECK(norms.q0_background_flagged);
    CHECK(norms.vel_l1_raw[0] == doctest::Approx(2.0 * spec.window).epsilon(1e-10));
    CHECK(norms.vel_l1_dev[0] == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("scaled family: all smallness measures scale linearly in epsilon") {
    auto measure = [&](double eps) {
        EpsilonFamilySpec spec;
        spec.epsilon = eps;
        spec.qhat_amp = {0.5, 0.3, 0.2};
        spec.samples = 4097;
        const InitialData data = make_epsilon_family(spec);
        const LambdaInitial init = lambda0_from_data(data, 1.0);
        const SmallnessNorms norms = smallness_norms(data);
        const InitialCharProfiles prof = pq0_from_data(data, init);
        return std::array<double, 4>{norms.arc_bv_max, norms.vel_l1_raw_max, prof.l1_raw_max,
                                     prof.l1_dev_max};
    };
    const auto a = measure(1e-2);
    const auto b = measure(5e-3);
    for (int i = 0; i < 4; ++i) {
        CHECK(a[static_cast<std::size_t>(i)] / b[static_cast<std::size_t>(i)] ==
              doctest::Approx(2.0).epsilon(0.05));
    }
}

TEST_CASE("characteristic profiles: algebraic special cases") {
    // constant position, zero velocity: both profiles vanish
    InitialData data = straight_string();
    const auto& ref = data.p[0];
    std::vector<double> z(ref.size(), 0.0);
    for (int c = 0; c < 4; ++c) {
        data.p_theta[static_cast<std::size_t>(c)] = UniformSpline(ref.x_min(), ref.spacing(), z);
        data.q[static_cast<std::size_t>(c)] = UniformSpline(ref.x_min(), ref.spacing(), z);
    }
    LambdaInitial unit;
    unit.window = data.window;
    unit.kappa = 2.0;
    std::vector<double> ones(ref.size(), 1.0), mones(ref.size(), -1.0);
    unit.lambda_plus0 = UniformSpline(ref.x_min(), ref.spacing(), ones);
    unit.lambda_minus0 = UniformSpline(ref.x_min(), ref.spacing(), mones);

    const InitialCharProfiles prof = pq0_from_data(data, unit);
    CHECK(prof.l1_raw_max == doctest::Approx(0.0));

    // zero velocity, unit speeds: P0 = -p', Q0 = +p'
    const InitialData straight = straight_string();
    InitialData quiet = straight;
    for (int c = 0; c < 4; ++c)
        quiet.q[static_cast<std::size_t>(c)] = UniformSpline(ref.x_min(), ref.spacing(), z);
    const InitialCharProfiles prof2 = pq0_from_data(quiet, unit);
    for (std::size_t j = 0; j < prof2.theta.size(); j += 50) {
        CHECK(prof2.P0[1][j] == doctest::Approx(-1.0));
        CHECK(prof2.Q0[1][j] == doctest::Approx(1.0));
    }
}

TEST_CASE("velocity recovery from the characteristic profiles") {
    EpsilonFamilySpec spec;
    spec.epsilon = 1e-2;
    spec.qhat_amp = {0.5, 0.1, 0.3};
    spec.samples = 1001;
    const InitialData data = make_epsilon_family(spec);
    const LambdaInitial init = lambda0_from_data(data, 1.0);
    const InitialCharProfiles prof = pq0_from_data(data, init);
    for (std::size_t j = 0; j < prof.theta.size(); j += 13) {
        const double th = prof.theta[j];
        const double lm = init.lambda_minus0.value(th);
        const double lp = init.lambda_plus0.value(th);
        for (int c = 0; c < 4; ++c) {
            const double v = (lp * prof.P0[static_cast<std::size_t>(c)][j] -
                              lm * prof.Q0[static_cast<std::size_t>(c)][j]) /
                             (lp - lm);
            CHECK(v == doctest::Approx(data.q[static_cast<std::size_t>(c)].value(th))
                           .epsilon(1e-12));
        }
    }
}

TEST_CASE("exterior margin enforcement") {
    EpsilonFamilySpec spec;
    spec.pbar = Vec4(0.0, 2.05, 0.0, 0.0); // violates 2m + 0.1 for m = 1
    spec.samples = 257;
    const InitialData data = make_epsilon_family(spec);
    CHECK_THROWS_AS(require_exterior_margin(data, 1.0, 0.1), HorizonViolation);
    CHECK_NOTHROW(require_exterior_margin(data, 0.0, 0.1));
}

TEST_CASE("non-time-like data is reported with the offending location") {
    // pure spatial velocity with no time component: g00 > 0
    InitialData data = straight_string();
    const auto& ref = data.p[0];
    std::vector<double> big(ref.size(), 2.0), zero(ref.size(), 0.0);
    data.q[0] = UniformSpline(ref.x_min(), ref.spacing(), zero);
    data.q[2] = UniformSpline(ref.x_min(), ref.spacing(), big);
    CHECK_THROWS_AS(lambda0_from_data(data, 0.0), NotTimelike);
}

TEST_CASE("table round trip preserves the data") {
    EpsilonFamilySpec spec;
    spec.epsilon = 3e-3;
    spec.qhat_amp = {0.2, 0.0, 0.4};
    spec.samples = 301;
    const InitialData data = make_epsilon_family(spec);
    const std::string path = "/tmp/strsim_test_data.dat";
    save_initial_data(data, path);
    const InitialData loaded = load_initial_data(path);
    CHECK(loaded.window == doctest::Approx(data.window).epsilon(1e-14));
    const auto& ref = data.p[0];
    for (std::size_t j = 0; j < ref.size(); j += 17) {
        const double th = ref.x_min() + ref.spacing() * static_cast<double>(j);
        for (int c = 0; c < 4; ++c) {
            CHECK(loaded.p[static_cast<std::size_t>(c)].value(th) ==
                  doctest::Approx(data.p[static_cast<std::size_t>(c)].value(th)).epsilon(1e-14));
            CHECK(loaded.q[static_cast<std::size_t>(c)].value(th) ==
                  doctest::Approx(data.q[static_cast<std::size_t>(c)].value(th)).epsilon(1e-14));
        }
    }
    std::remove(path.c_str());
}

TEST_CASE("malformed tables are rejected") {
    const std::string path = "/tmp/strsim_bad_data.dat";
    {
        std::ofstream out(path);
        out << "theta p0 p1 p2 p3 q0 q1 q2 q3\n";
        out << "0 0 1 0 0 1 0 0 0\n";
        out << "0.5 0 1 0 0 1 0 0 0\n";
        out << "1.7 0 1 0 0 1 0 0 0\n"; // nonuniform step
        out << "2.0 0 1 0 0 1 0 0 0\n";
    }
    CHECK_THROWS_AS(load_initial_data(path), SimError);
    std::remove(path.c_str());
    CHECK_THROWS_AS(load_initial_data("/tmp/definitely_missing_data.dat"), SimError);
}
