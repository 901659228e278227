#include <doctest.h>

#include <cmath>
#include <vector>

#include "strsim/errors.hpp"
#include "strsim/numerics.hpp"

using namespace strsim;

namespace {

UniformSpline sample_spline(double a, double b, int n, double (*fn)(double)) {
    std::vector<double> y(static_cast<std::size_t>(n));
    const double h = (b - a) / (n - 1);
    for (int j = 0; j < n; ++j) y[static_cast<std::size_t>(j)] = fn(a + h * j);
    return UniformSpline(a, h, std::move(y));
}

} // namespace

TEST_CASE("spline reproduces a smooth function and its derivative") {
    const auto s = sample_spline(-3.0, 3.0, 601, [](double x) { return std::sin(x); });
    double worst_v = 0.0, worst_d = 0.0;
    for (double x = -2.9; x <= 2.9; x += 0.0173) {
        worst_v = std::max(worst_v, std::abs(s.value(x) - std::sin(x)));
        worst_d = std::max(worst_d, std::abs(s.derivative(x) - std::cos(x)));
    }
    CHECK(worst_v < 1e-8);
    CHECK(worst_d < 1e-5);
}

TEST_CASE("spline extends by endpoint constants") {
    const auto s = sample_spline(-1.0, 1.0, 41, [](double x) { return x * x; });
    CHECK(s.value(-5.0) == doctest::Approx(1.0));
    CHECK(s.value(7.0) == doctest::Approx(1.0));
    CHECK(s.derivative(7.0) == 0.0);
}

TEST_CASE("spline integral matches analytic antiderivative and handles tails") {
    const auto s = sample_spline(0.0, 3.141592653589793, 801, [](double x) { return std::sin(x); });
    CHECK(s.integral(0.0, 3.141592653589793) == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(s.integral(0.25, 1.5) ==
          doctest::Approx(std::cos(0.25) - std::cos(1.5)).epsilon(1e-8));
    // tails are constant extensions; sin(0) = 0 on the left
    CHECK(s.integral(-2.0, 0.0) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("adaptive Simpson integrates a Gaussian to tight tolerance") {
    const double got =
        adaptive_simpson([](double x) { return std::exp(-x * x); }, -8.0, 8.0, 1e-12);
    CHECK(std::abs(got - std::sqrt(3.14159265358979323846)) < 1e-11);
}

TEST_CASE("bisection solves monotone equations") {
    const double root = bisect_monotone([](double x) { return x * x * x + x; }, -2.0, 3.0, 10.0);
    CHECK(root == doctest::Approx(2.0).epsilon(1e-11));
}

TEST_CASE("total variation: monotone and oscillatory samples") {
    std::vector<double> mono;
    for (int j = 0; j <= 100; ++j) mono.push_back(std::tanh(-3.0 + 0.06 * j));
    CHECK(bv_norm(mono) == doctest::Approx(std::tanh(3.0) - std::tanh(-3.0)).epsilon(1e-12));

    std::vector<double> wave;
    const int n = 4001;
    for (int j = 0; j < n; ++j) wave.push_back(std::sin(2.0 * 3.14159265358979 * j / (n - 1)));
    CHECK(std::abs(bv_norm(wave) - 4.0) < 1e-3);
}

TEST_CASE("stable quadratic roots") {
    {
        const auto [a, b] = stable_quadratic_roots(-1.0, 0.0, 1.0);
        CHECK(a == doctest::Approx(-1.0));
        CHECK(b == doctest::Approx(1.0));
    }
    {
        // g = (-3, 1, 2): roots (-1 +- sqrt(7)) / 2
        const auto [a, b] = stable_quadratic_roots(-3.0, 1.0, 2.0);
        CHECK(a == doctest::Approx((-1.0 - std::sqrt(7.0)) / 2.0).epsilon(1e-14));
        CHECK(b == doctest::Approx((-1.0 + std::sqrt(7.0)) / 2.0).epsilon(1e-14));
    }
    {
        // strongly separated roots: the small one must not cancel away
        const double g01 = 1e8, g00 = -1.0, g11 = 1.0;
        const auto [a, b] = stable_quadratic_roots(g00, g01, g11);
        // small root ~ 5e-9: its residual is well conditioned
        CHECK(std::abs(g11 * b * b + 2.0 * g01 * b + g00) < 1e-8);
        CHECK(a * b == doctest::Approx(g00 / g11).epsilon(1e-12));
        CHECK(a + b == doctest::Approx(-2.0 * g01 / g11).epsilon(1e-12));
    }
    CHECK_THROWS_AS(stable_quadratic_roots(1.0, 0.0, 1.0), NotTimelike);
}

TEST_CASE("Hermite table is exact on cubics and extends linearly") {
    auto f = [](double x) { return 1.0 + x - 0.5 * x * x + 0.25 * x * x * x; };
    auto df = [](double x) { return 1.0 - x + 0.75 * x * x; };
    std::vector<double> xs, ys, ds;
    for (int j = 0; j <= 10; ++j) {
        const double x = -2.0 + 0.4 * j;
        xs.push_back(x);
        ys.push_back(f(x));
        ds.push_back(df(x));
    }
    const HermiteTable table(xs, ys, ds);
    for (double x = -1.97; x < 1.97; x += 0.111)
        CHECK(table.value(x) == doctest::Approx(f(x)).epsilon(1e-13));
    CHECK(table.value(3.0) == doctest::Approx(f(2.0) + df(2.0) * 1.0));
}

TEST_CASE("adaptive Simpson reports failure to converge") {
    auto nasty = [](double x) { return std::sin(1000.0 * x); };
    CHECK_THROWS_AS(adaptive_simpson(nasty, 0.0, 1.0, 1e-14, 2), QuadratureFailure);
}
