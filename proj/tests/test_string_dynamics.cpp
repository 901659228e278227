#include <doctest.h>

#include <cmath>
#include <random>

#include "strsim/string_dynamics.hpp"
#include "strsim/verify.hpp"

using namespace strsim;

namespace {

WorldSheetJet jet_of(const Vec4& u, const Vec4& v, const Vec4& w) {
    WorldSheetJet jet;
    jet.u = u;
    jet.v = v;
    jet.w = w;
    return jet;
}

Mat12 system_matrix_from(const InducedMetric2& g) {
    Mat12 A = Mat12::Zero();
    for (int k = 0; k < 4; ++k) {
        A(4 + k, 4 + k) = -2.0 * g.g01 / g.g11;
        A(4 + k, 8 + k) = g.g00 / g.g11;
        A(8 + k, 4 + k) = -1.0;
    }
    return A;
}

} // namespace

TEST_CASE("induced metric: flat orthonormal gauge") {
    const WorldSheetJet jet =
        jet_of(Vec4(0, 7, 0, 0), Vec4(1, 0, 0, 0), Vec4(0, 0, 1, 0));
    const InducedMetric2 g = induced_metric_cartesian(jet, 0.0);
    CHECK(g.g00 == doctest::Approx(-1.0));
    CHECK(g.g01 == 0.0);
    CHECK(g.g11 == doctest::Approx(1.0));
    CHECK(g.delta == doctest::Approx(-1.0));
}

TEST_CASE("induced metric: radius-4 static and slowly moving states") {
    {
        const WorldSheetJet jet =
            jet_of(Vec4(0, 4, 0, 0), Vec4(1, 0, 0, 0), Vec4(0, 0, 1, 0));
        const InducedMetric2 g = induced_metric_cartesian(jet, 1.0);
        CHECK(g.g00 == doctest::Approx(-0.5).epsilon(1e-14));
        CHECK(g.g01 == 0.0);
        CHECK(g.g11 == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(g.delta == doctest::Approx(-0.5).epsilon(1e-13));
    }
    {
        const WorldSheetJet jet =
            jet_of(Vec4(0, 4, 0, 0), Vec4(1, 0.1, 0, 0), Vec4(0, 0, 1, 0));
        const InducedMetric2 g = induced_metric_cartesian(jet, 1.0);
        CHECK(g.g00 == doctest::Approx(-0.48).epsilon(1e-14));
        CHECK(g.g01 == 0.0);
        CHECK(g.g11 == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("characteristic speeds from the metric components") {
    {
        InducedMetric2 g{-1.0, 0.0, 1.0, -1.0};
        const auto [lm, lp] = characteristic_speeds(g);
        CHECK(lm == doctest::Approx(-1.0));
        CHECK(lp == doctest::Approx(1.0));
    }
    {
        InducedMetric2 g{-3.0, 1.0, 2.0, -3.0 * 2.0 - 1.0};
        const auto [lm, lp] = characteristic_speeds(g);
        CHECK(lm == doctest::Approx((-1.0 - std::sqrt(7.0)) / 2.0).epsilon(1e-14));
        CHECK(lp == doctest::Approx((-1.0 + std::sqrt(7.0)) / 2.0).epsilon(1e-14));
    }
    {
        InducedMetric2 g{-0.5, 0.0, 1.0, -0.5};
        const auto [lm, lp] = characteristic_speeds(g);
        CHECK(lp == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
        CHECK(lm == doctest::Approx(-std::sqrt(0.5)).epsilon(1e-14));
    }
    {
        InducedMetric2 g{-1.0, 0.0, 1e-15, -1e-15};
        CHECK_THROWS_AS(characteristic_speeds(g), DegenerateG11);
    }
    {
        InducedMetric2 g{1.0, 0.0, 1.0, 1.0};
        CHECK_THROWS_AS(characteristic_speeds(g), NotTimelike);
    }
}

TEST_CASE("eigenvector structure of the frozen system matrix") {
    InducedMetric2 g{-1.0, 0.0, 1.0, -1.0};
    const EigenStructure es = eigen_structure(g);
    // slow family, first component: (0, e1, e1) since -lambda_minus = 1
    CHECK(es.right(4, 4) == doctest::Approx(1.0));
    CHECK(es.right(8, 4) == doctest::Approx(1.0));
    CHECK(es.right.col(4).cwiseAbs().sum() == doctest::Approx(2.0));

    const Mat12 A = system_matrix_from(g);
    for (int i = 0; i < 12; ++i) {
        const double lam = i < 4 ? 0.0 : (i < 8 ? es.lambda_minus : es.lambda_plus);
        CHECK((A * es.right.col(i) - lam * es.right.col(i)).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((es.left.row(i) * A - lam * es.left.row(i)).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("left and right eigenvector families are orthogonal across groups") {
    std::mt19937_64 rng(3);
    for (int k = 0; k < 100; ++k) {
        const WorldSheetJet jet = random_string_state(rng, 1.0);
        const InducedMetric2 g = induced_metric_cartesian(jet, 1.0);
        const EigenStructure es = eigen_structure(g);
        const Mat12 A = system_matrix_from(g);
        for (int i = 0; i < 12; ++i) {
            const double lam_i = i < 4 ? 0.0 : (i < 8 ? es.lambda_minus : es.lambda_plus);
            CHECK((A * es.right.col(i) - lam_i * es.right.col(i)).cwiseAbs().maxCoeff() <
                  1e-12 * (1.0 + std::abs(lam_i)));
            for (int j = 0; j < 12; ++j) {
                if (i / 4 == j / 4) continue;
                CHECK(std::abs(es.left.row(i).dot(es.right.col(j))) < 1e-12);
            }
        }
    }
}

TEST_CASE("flat limit kills every source term") {
    std::mt19937_64 rng(5);
    for (int k = 0; k < 50; ++k) {
        const WorldSheetJet jet = random_string_state(rng, 0.0);
        const SystemMatrices sys = assemble_system(jet, 0.0);
        CHECK(sys.B.segment<8>(4).cwiseAbs().maxCoeff() == 0.0);
        CHECK((sys.B.segment<4>(0) + jet.v).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("source of a static straight state, frozen value") {
    // u = (0, 4, 0, 0), v = (1,0,0,0), w = (0,0,1,0), m = 1:
    // B entry for the first spatial velocity component is
    // 4 [ m(r-2m)/r^4 * 1 + (2m/r^3)(g00/g11)|w|^2 ] = 1/32 - 1/16 = -1/32
    const WorldSheetJet jet =
        jet_of(Vec4(0, 4, 0, 0), Vec4(1, 0, 0, 0), Vec4(0, 0, 1, 0));
    const SystemMatrices sys = assemble_system(jet, 1.0);
    CHECK(sys.B(4) == doctest::Approx(0.0));
    CHECK(sys.B(5) == doctest::Approx(-1.0 / 32.0).epsilon(1e-14));
    CHECK(sys.B(6) == 0.0);
    CHECK(sys.B(7) == 0.0);
    // position block always carries -v
    CHECK(sys.B(0) == doctest::Approx(-1.0));
}

TEST_CASE("quasilinear system agrees with the direct second-order route") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (int k = 0; k < 200; ++k) {
        const double m = k % 2 == 0 ? 1.0 : 0.0;
        const WorldSheetJet jet = random_string_state(rng, m);
        Vec4 v_theta, w_theta;
        for (int c = 0; c < 4; ++c) {
            v_theta(c) = uni(rng);
            w_theta(c) = uni(rng);
        }
        const SystemMatrices sys = assemble_system(jet, m);
        Vec12 U_theta;
        U_theta << jet.w, v_theta, w_theta;
        const Vec12 U_t = -(sys.A * U_theta) - sys.B;
        const Vec4 direct = second_order_acceleration(jet, v_theta, w_theta, m);
        CHECK((U_t.segment<4>(4) - direct).cwiseAbs().maxCoeff() <
              1e-10 * (1.0 + direct.cwiseAbs().maxCoeff()));
        // position and gradient blocks are structural
        CHECK((U_t.segment<4>(0) - jet.v).cwiseAbs().maxCoeff() == 0.0);
        CHECK((U_t.segment<4>(8) - v_theta).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("analytic speed gradient matches finite differences") {
    std::mt19937_64 rng(11);
    for (int k = 0; k < 100; ++k) {
        const double m = k % 2 == 0 ? 1.0 : 0.0;
        const WorldSheetJet jet = random_string_state(rng, m);
        for (const bool plus : {false, true}) {
            const Vec12 grad = speed_gradient(jet, m, plus);
            CHECK(grad(0) == 0.0); // no dependence on the time coordinate
            const Vec12 U = jet.packed();
            for (int c = 0; c < 12; ++c) {
                const double h = 1e-6 * (1.0 + std::abs(U(c)));
                Vec12 up = U, dn = U;
                up(c) += h;
                dn(c) -= h;
                double fd;
                try {
                    auto lam = [&](const Vec12& s) {
                        const auto [a, b] =
                            characteristic_speeds(induced_metric_cartesian(
                                WorldSheetJet::unpack(s), m));
                        return plus ? b : a;
                    };
                    fd = (lam(up) - lam(dn)) / (2.0 * h);
                } catch (const SimError&) {
                    continue;
                }
                CHECK(std::abs(grad(c) - fd) < 5e-5 * (1.0 + std::abs(fd)));
            }
        }
    }
}

TEST_CASE("characteristic variables: construction and inversion") {
    {
        const WorldSheetJet jet =
            jet_of(Vec4(0, 7, 0, 0), Vec4(1, 0, 0, 0), Vec4(0, 0, 1, 0));
        const CharacteristicDecomposition cd = to_characteristic(jet, 0.0);
        CHECK(cd.lambda_minus == doctest::Approx(-1.0));
        CHECK(cd.lambda_plus == doctest::Approx(1.0));
        CHECK((cd.state.P - Vec4(1, 0, -1, 0)).cwiseAbs().maxCoeff() < 1e-14);
        CHECK((cd.state.Q - Vec4(1, 0, 1, 0)).cwiseAbs().maxCoeff() < 1e-14);
    }
    {
        // vanishing theta-derivative collapses both variables onto v
        CharacteristicState cs;
        cs.S = Vec4(0, 5, 0, 0);
        cs.P = Vec4(1, 0.3, 0, 0);
        cs.Q = cs.P;
        const WorldSheetJet jet = from_characteristic(cs, -0.8, 1.2);
        CHECK(jet.w.cwiseAbs().maxCoeff() == 0.0);
        CHECK((jet.v - cs.P).cwiseAbs().maxCoeff() < 1e-15);
    }
    std::mt19937_64 rng(13);
    for (int k = 0; k < 300; ++k) {
        const double m = k % 2 == 0 ? 1.0 : 0.0;
        const WorldSheetJet jet = random_string_state(rng, m);
        const CharacteristicDecomposition cd = to_characteristic(jet, m);
        const WorldSheetJet back =
            from_characteristic(cd.state, cd.lambda_minus, cd.lambda_plus);
        const double scale = 1.0 + jet.packed().cwiseAbs().maxCoeff();
        CHECK((back.packed() - jet.packed()).cwiseAbs().maxCoeff() < 1e-12 * scale);
    }
    CHECK_THROWS_AS(from_characteristic(CharacteristicState{}, 1.0, 1.0 + 1e-15),
                    CoincidentCharacteristics);
}

TEST_CASE("characteristic sources: flat, frozen, and quadratic-off cases") {
    {
        // flat space: transport only
        CharacteristicState cs;
        cs.S = Vec4(0, 3, 1, 0);
        cs.P = Vec4(0.5, 1, 0, 0);
        cs.Q = Vec4(-0.2, 0, 1, 0);
        const SourceTerms st = characteristic_rhs(cs, -1.0, 1.0, 0.0);
        CHECK(st.pq_rhs.cwiseAbs().maxCoeff() == 0.0);
        const Vec4 expect = (1.0 * cs.P - (-1.0) * cs.Q) / 2.0;
        CHECK((st.s_rhs - expect).cwiseAbs().maxCoeff() < 1e-15);
    }
    {
        // quadratic sources vanish when both variables vanish
        CharacteristicState cs;
        cs.S = Vec4(0, 5, 0, 0);
        const SourceTerms st = characteristic_rhs(cs, -1.0, 1.0, 1.0);
        CHECK(st.pq_rhs.cwiseAbs().maxCoeff() == 0.0);
        CHECK(st.s_rhs.cwiseAbs().maxCoeff() == 0.0);
    }
    {
        // hand-evaluated exterior state: spatial source 3/32 on the first axis
        CharacteristicState cs;
        cs.S = Vec4(0, 4, 0, 0);
        cs.P = Vec4(1, 0, 1, 0);
        cs.Q = Vec4(1, 0, -1, 0);
        const SourceTerms st = characteristic_rhs(cs, -1.0, 1.0, 1.0);
        CHECK(st.pq_rhs(0) == doctest::Approx(0.0));
        CHECK(st.pq_rhs(1) == doctest::Approx(3.0 / 32.0).epsilon(1e-14));
        CHECK(st.pq_rhs(2) == 0.0);
        CHECK(st.pq_rhs(3) == 0.0);
    }
}

TEST_CASE("characteristic sources equal the negated quasilinear sources") {
    std::mt19937_64 rng(17);
    for (int k = 0; k < 300; ++k) {
        const double m = k % 3 == 0 ? 0.0 : 1.0;
        const WorldSheetJet jet = random_string_state(rng, m);
        const CharacteristicDecomposition cd = to_characteristic(jet, m);
        const SourceTerms st = characteristic_rhs(cd.state, cd.lambda_minus, cd.lambda_plus, m);
        const SystemMatrices sys = assemble_system(jet, m);
        const Vec4 expected = -sys.B.segment<4>(4);
        CHECK((st.pq_rhs - expected).cwiseAbs().maxCoeff() <
              1e-12 * (1.0 + expected.cwiseAbs().maxCoeff()));
        CHECK((st.s_rhs - jet.v).cwiseAbs().maxCoeff() <
              1e-12 * (1.0 + jet.v.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("directional derivatives of the speeds vanish along their own families") {
    std::mt19937_64 rng(19);
    double worst = 0.0;
    for (int k = 0; k < 500; ++k) {
        const double m = k % 2 == 0 ? 1.0 : 0.5;
        const WorldSheetJet jet = random_string_state(rng, m);
        const EigenStructure es = eigen_structure(induced_metric_cartesian(jet, m));
        const Vec12 U = jet.packed();
        const double h = 1e-4 * (1.0 + U.cwiseAbs().maxCoeff());
        for (const bool plus : {false, true}) {
            for (int i = 0; i < 4; ++i) {
                Vec12 dir = es.right.col((plus ? 8 : 4) + i);
                dir.normalize();
                auto lam = [&](const Vec12& s) {
                    const auto [a, b] = characteristic_speeds(
                        induced_metric_cartesian(WorldSheetJet::unpack(s), m));
                    return plus ? b : a;
                };
                try {
                    worst = std::max(worst,
                                     std::abs((lam(U + h * dir) - lam(U - h * dir)) / (2.0 * h)));
                } catch (const SimError&) {
                }
            }
        }
    }
    CHECK(worst < 1e-7);
}

TEST_CASE("speed fields with constant values have zero transport residual") {
    const int nt = 9, nx = 17;
    std::vector<std::vector<double>> lm(nt, std::vector<double>(nx, -1.0));
    std::vector<std::vector<double>> lp(nt, std::vector<double>(nx, 1.0));
    const auto [a, b] = transport_residual(lm, lp, 0.1, 0.1);
    CHECK(a == 0.0);
    CHECK(b == 0.0);
}

TEST_CASE("states inside the guard radius are rejected") {
    const WorldSheetJet jet =
        jet_of(Vec4(0, 1.9, 0, 0), Vec4(1, 0, 0, 0), Vec4(0, 0, 1, 0));
    CHECK_THROWS_AS(induced_metric_cartesian(jet, 1.0), HorizonViolation);
}
