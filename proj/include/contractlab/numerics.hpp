#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace contractlab {

/// Golden-section search for a maximum of f on [a, b].
/// Assumes f unimodal there; stops when the bracket width falls below tol.
template <class F>
std::pair<double, double> golden_max(F&& f, double a, double b, double tol, int max_iter = 400) {
    constexpr double invphi = 0.6180339887498949;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < max_iter && (b - a) > tol; ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        }
    }
    return f1 >= f2 ? std::make_pair(x1, f1) : std::make_pair(x2, f2);
}

template <class F>
std::pair<double, double> golden_min(F&& f, double a, double b, double tol, int max_iter = 400) {
    auto [x, v] = golden_max([&](double t) { return -f(t); }, a, b, tol, max_iter);
    return {x, -v};
}

namespace detail {

template <class F>
double simpson_rec(F& f, double a, double b, double fa, double fm, double fb, double whole,
                   double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature on [a, b] to absolute tolerance tol.
template <class F>
double adaptive_simpson(F&& f, double a, double b, double tol, int max_depth = 48) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

/// Thomas solve of a tridiagonal system; sub[0] and sup[n-1] are ignored.
/// Overwrites its scratch internally; throws on a vanishing pivot.
std::vector<double> solve_tridiagonal(const std::vector<double>& sub, const std::vector<double>& diag,
                                      const std::vector<double>& sup, const std::vector<double>& rhs);

/// Natural cubic spline through values at x_i = i*h. Evaluation clamps to the
/// data range. Reproduces smooth profiles to high order away from the ends,
/// which the sub-cell refinements of the intervention operator rely on.
class UniformCubicSpline {
public:
    UniformCubicSpline(std::span<const double> values, double h);
    double operator()(double x) const;

private:
    std::vector<double> f_;
    std::vector<double> sigma_;  // second derivatives at the nodes
    double h_;
};

}  // namespace contractlab
