#include "strsim/characteristic_map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "strsim/errors.hpp"

namespace strsim {

AssumptionReport check_assumptions(const LambdaInitial& init) {
    AssumptionReport rep;
    const auto& lm = init.lambda_minus0;
    const auto& lp = init.lambda_plus0;
    const std::size_t n = lm.size();

    double sup_m = 0.0, sup_dm = 0.0, sup_p = 0.0, sup_dp = 0.0;
    double kappa = std::numeric_limits<double>::infinity();
    double prefix_max_minus = -std::numeric_limits<double>::infinity();
    double prefix_arg = lm.x_min();
    rep.h3_margin = std::numeric_limits<double>::infinity();

    bool finite = true;
    for (std::size_t j = 0; j < n; ++j) {
        const double th = lm.x_min() + lm.spacing() * static_cast<double>(j);
        const double a = lm.value(th), b = lp.value(th);
        const double da = lm.derivative(th), db = lp.derivative(th);
        if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(da) || !std::isfinite(db))
            finite = false;
        sup_m = std::max(sup_m, std::abs(a));
        sup_p = std::max(sup_p, std::abs(b));
        sup_dm = std::max(sup_dm, std::abs(da));
        sup_dp = std::max(sup_dp, std::abs(db));
        kappa = std::min(kappa, b - a);

        if (a > prefix_max_minus) {
            prefix_max_minus = a;
            prefix_arg = th;
        }
        const double margin = b - prefix_max_minus;
        if (margin < rep.h3_margin) {
            rep.h3_margin = margin;
            rep.witness_theta1 = prefix_arg;
            rep.witness_theta2 = th;
        }
    }

    rep.c1_norm_minus = sup_m + sup_dm;
    rep.c1_norm_plus = sup_p + sup_dp;
    rep.kappa = kappa;
    rep.h1 = finite;
    rep.h2 = kappa > 0.0;
    rep.h3 = rep.h3_margin > 0.0;
    return rep;
}

CoordinateMap CoordinateMap::build(const LambdaInitial& init) {
    CoordinateMap map;
    map.init_ = init;

    const auto& lm = init.lambda_minus0;
    const auto& lp = init.lambda_plus0;
    const std::size_t n = lm.size();
    const double x0 = lm.x_min(), h = lm.spacing();
    if (!(lm.x_min() < 0.0 && lm.x_max() > 0.0))
        throw SimError("CoordinateMap: window must contain theta = 0");

    auto gap = [&](double th) {
        const double g = lp.value(th) - lm.value(th);
        if (!(g > 0.0)) throw AssumptionViolated("CoordinateMap: speed gap not positive");
        return g;
    };

    std::vector<double> theta(n), vt(n), dvt(n), ap(n), am(n), dap(n), dam(n);
    for (std::size_t j = 0; j < n; ++j) {
        theta[j] = x0 + h * static_cast<double>(j);
        dvt[j] = 2.0 / gap(theta[j]);
        dap[j] = lp.value(theta[j]);
        dam[j] = lm.value(theta[j]);
        map.max_abs_lambda_ =
            std::max({map.max_abs_lambda_, std::abs(dap[j]), std::abs(dam[j])});
    }

    // cumulative integrals of 2/gap and 2*lambda/gap over each grid interval
    vt[0] = 0.0;
    ap[0] = 0.0;
    am[0] = 0.0;
    for (std::size_t j = 1; j < n; ++j) {
        const double a = theta[j - 1], b = theta[j];
        vt[j] = vt[j - 1] + adaptive_simpson([&](double th) { return 2.0 / gap(th); }, a, b,
                                             1e-13 * (b - a) + 1e-15);
        ap[j] = ap[j - 1] +
                adaptive_simpson([&](double th) { return 2.0 * lp.value(th) / gap(th); }, a, b,
                                 1e-13 * (b - a) + 1e-15);
        am[j] = am[j - 1] +
                adaptive_simpson([&](double th) { return 2.0 * lm.value(th) / gap(th); }, a, b,
                                 1e-13 * (b - a) + 1e-15);
    }

    // anchor all tables at theta = 0 (vartheta = 0)
    {
        HermiteTable raw(theta, vt, dvt);
        const double shift = raw.value(0.0);
        for (auto& v : vt) v -= shift;
    }
    map.theta_to_vt_ = HermiteTable(theta, vt, dvt);
    if (!map.theta_to_vt_.strictly_increasing())
        throw AssumptionViolated("CoordinateMap: theta0 table not monotone");

    std::vector<double> inv_d(n);
    for (std::size_t j = 0; j < n; ++j) inv_d[j] = 1.0 / dvt[j]; // = gap/2
    map.vt_to_theta_ = HermiteTable(vt, theta, inv_d);

    // antiderivatives of the transported speeds, parametrized by vartheta
    {
        HermiteTable rawp(vt, ap, dap);
        const double sp = rawp.value(0.0);
        for (auto& v : ap) v -= sp;
        HermiteTable rawm(vt, am, dam);
        const double sm = rawm.value(0.0);
        for (auto& v : am) v -= sm;
    }
    map.a_plus_ = HermiteTable(vt, ap, dap);
    map.a_minus_ = HermiteTable(vt, am, dam);

    map.vt_left_ = vt.front();
    map.vt_right_ = vt.back();
    return map;
}

double CoordinateMap::phi(double tau, double vartheta) const {
    return 0.5 * (a_plus_.value(vartheta + tau) - a_minus_.value(vartheta - tau));
}

double CoordinateMap::theta_map(double t, double theta) const {
    if (t == 0.0) return theta_to_vt_.value(theta);
    const double reach = max_abs_lambda_ * std::abs(t) + 1e-9;
    const double lo = theta_to_vt_.value(theta - reach) - 1e-9;
    const double hi = theta_to_vt_.value(theta + reach) + 1e-9;
    return bisect_monotone([&](double vt) { return phi(t, vt); }, lo, hi, theta, 1e-12);
}

std::pair<double, double> CoordinateMap::lambda_tilde(double tau, double vartheta) const {
    const double lmv = init_.lambda_minus0.value(vt_to_theta_.value(vartheta - tau));
    const double lpv = init_.lambda_plus0.value(vt_to_theta_.value(vartheta + tau));
    return {lmv, lpv};
}

std::pair<double, double> CoordinateMap::lambda_at(double t, double theta) const {
    return lambda_tilde(t, theta_map(t, theta));
}

double CoordinateMap::jacobian(double t, double theta) const {
    const auto [lmv, lpv] = lambda_at(t, theta);
    return 2.0 / (lpv - lmv);
}

double conservation_residual(const std::vector<std::vector<double>>& lambda_minus,
                             const std::vector<std::vector<double>>& lambda_plus, double dt,
                             double dtheta) {
    double worst = 0.0;
    const std::size_t nt = lambda_minus.size();
    for (std::size_t k = 1; k + 1 < nt; ++k) {
        const std::size_t nx = lambda_minus[k].size();
        for (std::size_t j = 1; j + 1 < nx; ++j) {
            auto density = [&](std::size_t kk, std::size_t jj) {
                return 2.0 / (lambda_plus[kk][jj] - lambda_minus[kk][jj]);
            };
            auto flux = [&](std::size_t kk, std::size_t jj) {
                return (lambda_plus[kk][jj] + lambda_minus[kk][jj]) /
                       (lambda_plus[kk][jj] - lambda_minus[kk][jj]);
            };
            const double ddt = (density(k + 1, j) - density(k - 1, j)) / (2.0 * dt);
            const double ddx = (flux(k, j + 1) - flux(k, j - 1)) / (2.0 * dtheta);
            worst = std::max(worst, std::abs(ddt + ddx));
        }
    }
    return worst;
}

} // namespace strsim
