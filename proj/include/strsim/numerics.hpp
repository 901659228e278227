#pragma once

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

namespace strsim {

/// Natural cubic spline over a uniform grid. Outside the grid the function is
/// extended by its endpoint values (derivative zero), matching the convention
/// that sampled data is constant outside its window.
class UniformSpline {
  public:
    UniformSpline() = default;
    UniformSpline(double x0, double h, std::vector<double> values);

    double operator()(double x) const { return value(x); }
    double value(double x) const;
    double derivative(double x) const;
    double second_derivative(double x) const;

    /// Exact integral of the piecewise-cubic interpolant over [a, b].
    double integral(double a, double b) const;

    double x_min() const { return x0_; }
    double x_max() const { return x0_ + h_ * static_cast<double>(n_ - 1); }
    double spacing() const { return h_; }
    std::size_t size() const { return n_; }
    const std::vector<double>& values() const { return y_; }

  private:
    double x0_ = 0.0;
    double h_ = 1.0;
    std::size_t n_ = 0;
    std::vector<double> y_;
    std::vector<double> m_; // second derivatives at nodes

    // integral of the interpolant from x0_ to x, x clamped to the grid
    double integral_from_left(double x) const;
};

/// Tabulated monotone function with exact nodal derivatives, evaluated by
/// piecewise cubic Hermite interpolation. Outside the table it extends
/// linearly with the endpoint slope, which is exact for data whose underlying
/// generator is constant beyond the window.
class HermiteTable {
  public:
    HermiteTable() = default;
    HermiteTable(std::vector<double> x, std::vector<double> y, std::vector<double> dydx);

    double value(double x) const;
    double derivative(double x) const;
    double operator()(double x) const { return value(x); }

    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }
    const std::vector<double>& abscissae() const { return x_; }
    const std::vector<double>& ordinates() const { return y_; }

    bool strictly_increasing() const;

  private:
    std::vector<double> x_, y_, d_;
    std::size_t locate(double x) const;
};

/// Adaptive Simpson quadrature to absolute tolerance `tol`.
/// Throws QuadratureFailure when the recursion depth limit is exceeded
/// without reaching the tolerance.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-10, int max_depth = 40);

/// Bracketed bisection for a continuous monotone function: returns x with
/// f(x) = target to absolute tolerance `tol`. `lo`/`hi` must bracket.
double bisect_monotone(const std::function<double(double)>& f, double lo, double hi,
                       double target, double tol = 1e-12);

/// Total variation of the piecewise-linear interpolant of the samples.
double bv_norm(const std::vector<double>& samples);

/// Stable roots of g11*x^2 + 2*g01*x + g00 = 0 given a positive discriminant
/// g01^2 - g00*g11; returns (smaller, larger).
std::pair<double, double> stable_quadratic_roots(double g00, double g01, double g11);

} // namespace strsim
