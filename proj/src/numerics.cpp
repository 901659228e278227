#include "strsim/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "strsim/errors.hpp"

namespace strsim {

UniformSpline::UniformSpline(double x0, double h, std::vector<double> values)
    : x0_(x0), h_(h), n_(values.size()), y_(std::move(values)) {
    if (n_ < 2) throw std::invalid_argument("UniformSpline: need at least two samples");
    if (!(h > 0.0)) throw std::invalid_argument("UniformSpline: spacing must be positive");

    m_.assign(n_, 0.0);
    if (n_ == 2) return;

    // natural spline: tridiagonal system for interior second derivatives
    const std::size_t k = n_ - 2;
    std::vector<double> diag(k, 4.0), rhs(k);
    for (std::size_t i = 0; i < k; ++i)
        rhs[i] = 6.0 * (y_[i] - 2.0 * y_[i + 1] + y_[i + 2]) / (h_ * h_);
    for (std::size_t i = 1; i < k; ++i) {
        const double w = 1.0 / diag[i - 1];
        diag[i] -= w;
        rhs[i] -= w * rhs[i - 1];
    }
    std::vector<double> sol(k);
    sol[k - 1] = rhs[k - 1] / diag[k - 1];
    for (std::size_t i = k - 1; i-- > 0;)
        sol[i] = (rhs[i] - sol[i + 1]) / diag[i];
    for (std::size_t i = 0; i < k; ++i) m_[i + 1] = sol[i];
}

double UniformSpline::value(double x) const {
    if (x <= x0_) return y_.front();
    if (x >= x_max()) return y_.back();
    const std::size_t i = std::min(static_cast<std::size_t>((x - x0_) / h_), n_ - 2);
    const double a = x0_ + h_ * static_cast<double>(i);
    const double t = x - a;
    const double s = h_ - t;
    return (m_[i] * s * s * s + m_[i + 1] * t * t * t) / (6.0 * h_) +
           (y_[i] / h_ - m_[i] * h_ / 6.0) * s + (y_[i + 1] / h_ - m_[i + 1] * h_ / 6.0) * t;
}

double UniformSpline::derivative(double x) const {
    if (x <= x0_ || x >= x_max()) {
        // one-sided derivative at the boundary, zero beyond it
        if (x < x0_ - 1e-300 || x > x_max() + 1e-300) return 0.0;
        x = std::clamp(x, x0_, x_max());
    }
    std::size_t i = std::min(static_cast<std::size_t>((x - x0_) / h_), n_ - 2);
    const double a = x0_ + h_ * static_cast<double>(i);
    const double t = x - a;
    const double s = h_ - t;
    return (-m_[i] * s * s + m_[i + 1] * t * t) / (2.0 * h_) +
           (y_[i + 1] - y_[i]) / h_ + (m_[i] - m_[i + 1]) * h_ / 6.0;
}

double UniformSpline::second_derivative(double x) const {
    x = std::clamp(x, x0_, x_max());
    std::size_t i = std::min(static_cast<std::size_t>((x - x0_) / h_), n_ - 2);
    const double a = x0_ + h_ * static_cast<double>(i);
    const double t = x - a;
    const double s = h_ - t;
    return (m_[i] * s + m_[i + 1] * t) / h_;
}

double UniformSpline::integral_from_left(double x) const {
    x = std::clamp(x, x0_, x_max());
    const std::size_t full = std::min(static_cast<std::size_t>((x - x0_) / h_), n_ - 2);
    double acc = 0.0;
    for (std::size_t i = 0; i < full; ++i)
        acc += h_ * 0.5 * (y_[i] + y_[i + 1]) - h_ * h_ * h_ * (m_[i] + m_[i + 1]) / 24.0;
    // partial interval [node(full), x]
    const double a = x0_ + h_ * static_cast<double>(full);
    const double t = x - a;
    if (t > 0.0) {
        const std::size_t i = full;
        const double s = h_ - t;
        const double h4 = h_ * h_ * h_ * h_;
        // antiderivative of the cubic segment evaluated at t, minus value at 0
        acc += (-m_[i] * (s * s * s * s - h4) / 4.0 + m_[i + 1] * t * t * t * t / 4.0) / (6.0 * h_) +
               (y_[i] / h_ - m_[i] * h_ / 6.0) * (h_ * h_ - s * s) / 2.0 +
               (y_[i + 1] / h_ - m_[i + 1] * h_ / 6.0) * t * t / 2.0;
    }
    return acc;
}

double UniformSpline::integral(double a, double b) const {
    if (a > b) return -integral(b, a);
    double acc = 0.0;
    // constant tails
    if (a < x0_) {
        acc += (std::min(b, x0_) - a) * y_.front();
        a = x0_;
    }
    if (b > x_max()) {
        acc += (b - std::max(a, x_max())) * y_.back();
        b = x_max();
    }
    if (b > a) acc += integral_from_left(b) - integral_from_left(a);
    return acc;
}

HermiteTable::HermiteTable(std::vector<double> x, std::vector<double> y, std::vector<double> dydx)
    : x_(std::move(x)), y_(std::move(y)), d_(std::move(dydx)) {
    if (x_.size() < 2 || x_.size() != y_.size() || x_.size() != d_.size())
        throw std::invalid_argument("HermiteTable: inconsistent table sizes");
    for (std::size_t i = 1; i < x_.size(); ++i)
        if (!(x_[i] > x_[i - 1]))
            throw std::invalid_argument("HermiteTable: abscissae must be strictly increasing");
}

std::size_t HermiteTable::locate(double x) const {
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    if (it == x_.begin()) return 0;
    std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
    return std::min(i, x_.size() - 2);
}

double HermiteTable::value(double x) const {
    if (x <= x_.front()) return y_.front() + d_.front() * (x - x_.front());
    if (x >= x_.back()) return y_.back() + d_.back() * (x - x_.back());
    const std::size_t i = locate(x);
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1;
    const double h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2;
    const double h11 = t3 - t2;
    return h00 * y_[i] + h10 * h * d_[i] + h01 * y_[i + 1] + h11 * h * d_[i + 1];
}

double HermiteTable::derivative(double x) const {
    if (x <= x_.front()) return d_.front();
    if (x >= x_.back()) return d_.back();
    const std::size_t i = locate(x);
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double t2 = t * t;
    return ((6 * t2 - 6 * t) * y_[i] + (3 * t2 - 4 * t + 1) * h * d_[i] +
            (-6 * t2 + 6 * t) * y_[i + 1] + (3 * t2 - 2 * t) * h * d_[i + 1]) /
           h;
}

bool HermiteTable::strictly_increasing() const {
    for (std::size_t i = 1; i < y_.size(); ++i)
        if (!(y_[i] > y_[i - 1])) return false;
    return true;
}

namespace {

double simpson(double a, double fa, double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const std::function<double(double)>& f, double a, double fa, double b,
                     double fb, double fm, double whole, double tol, int depth, bool& ok) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(a, fa, m, fm, flm);
    const double right = simpson(m, fm, b, fb, frm);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    if (depth <= 0) {
        ok = false;
        return left + right;
    }
    return adaptive_step(f, a, fa, m, fm, flm, left, 0.5 * tol, depth - 1, ok) +
           adaptive_step(f, m, fm, b, fb, frm, right, 0.5 * tol, depth - 1, ok);
}

} // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int max_depth) {
    if (a == b) return 0.0;
    double sign = 1.0;
    if (a > b) {
        std::swap(a, b);
        sign = -1.0;
    }
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = simpson(a, fa, b, fb, fm);
    bool ok = true;
    const double result = adaptive_step(f, a, fa, b, fb, fm, whole, tol, max_depth, ok);
    if (!ok) throw QuadratureFailure("adaptive_simpson: tolerance not reached");
    return sign * result;
}

double bisect_monotone(const std::function<double(double)>& f, double lo, double hi, double target,
                       double tol) {
    double flo = f(lo) - target;
    double fhi = f(hi) - target;
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (flo * fhi > 0.0)
        throw std::invalid_argument("bisect_monotone: endpoints do not bracket the target");
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break; // spacing at floating-point resolution
        const double fm = f(mid) - target;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double bv_norm(const std::vector<double>& samples) {
    double tv = 0.0;
    for (std::size_t i = 1; i < samples.size(); ++i) tv += std::abs(samples[i] - samples[i - 1]);
    return tv;
}

std::pair<double, double> stable_quadratic_roots(double g00, double g01, double g11) {
    const double disc = g01 * g01 - g00 * g11;
    if (!(disc > 0.0)) throw NotTimelike("stable_quadratic_roots: non-positive discriminant");
    const double sq = std::sqrt(disc);
    // roots of g11 x^2 + 2 g01 x + g00: avoid cancellation in -g01 +- sq
    const double q = -(g01 + (g01 >= 0.0 ? sq : -sq));
    double r1, r2;
    if (q != 0.0) {
        r1 = q / g11;
        r2 = g00 / q;
    } else {
        r1 = sq / g11;
        r2 = -sq / g11;
    }
    if (r1 > r2) std::swap(r1, r2);
    return {r1, r2};
}

} // namespace strsim
