#pragma once

// Brute-force reference implementations used as independent oracles by the
// unit and acceptance suites. Deliberately naive; kept apart from the library
// code paths they check.

#include <cmath>
#include <span>
#include <vector>

namespace oracles {

/// max over a dense a-grid of a + h(a) p with h(a) = c2 a^2 + c1 a.
inline double brute_G_star(double p, double a_bar, double c2, double c1, long points) {
    double best = -1e300;
    for (long j = 0; j <= points; ++j) {
        const double a = a_bar * static_cast<double>(j) / static_cast<double>(points);
        const double v = a + (c2 * a * a + c1 * a) * p;
        if (v > best) best = v;
    }
    return best;
}

/// min over a dense y-grid of y p + (1 + k) y^gamma.
inline double brute_F_star(double p, double k, double gamma, double y_hi, long points) {
    double best = 1e300;
    for (long j = 0; j <= points; ++j) {
        const double y = y_hi * static_cast<double>(j) / static_cast<double>(points);
        const double v = y * p + (1.0 + k) * std::pow(y, gamma);
        if (v < best) best = v;
    }
    return best;
}

/// smallest maximizer over a dense a-grid of z a - h(a).
inline double brute_best_response(double z, double a_bar, double c2, double c1, long points) {
    double best = -1e300, arg = 0.0;
    for (long j = 0; j <= points; ++j) {
        const double a = a_bar * static_cast<double>(j) / static_cast<double>(points);
        const double v = z * a - (c2 * a * a + c1 * a);
        if (v > best) {
            best = v;
            arg = a;
        }
    }
    return arg;
}

/// max over a dense z-grid of r h(a(z)) p + rho a(z) + 0.5 q r^2 sigma^2 z^2.
inline double brute_optimize_z(double p, double q, double r, double rho, double sigma,
                               double a_bar, double c2, double c1, double z_hi, long points) {
    double best = -1e300;
    for (long j = 0; j <= points; ++j) {
        const double z = z_hi * static_cast<double>(j) / static_cast<double>(points);
        double a = (z - c1) / (2.0 * c2);
        a = std::min(std::max(a, 0.0), a_bar);
        const double v = r * (c2 * a * a + c1 * a) * p + rho * a +
                         0.5 * q * r * r * sigma * sigma * z * z;
        if (v > best) best = v;
    }
    return best;
}

/// grid-only intervention operator: out[i] = max_{j<=i} slice[j] - (1+k)(y_i-y_j)^gamma.
inline std::vector<double> grid_M(std::span<const double> slice, std::span<const double> ys,
                                  double k, double gamma) {
    std::vector<double> out(slice.size());
    for (std::size_t i = 0; i < slice.size(); ++i) {
        double best = slice[i];
        for (std::size_t j = 0; j < i; ++j) {
            const double eta = ys[i] - ys[j];
            const double v = slice[j] - (1.0 + k) * std::pow(eta, gamma);
            if (v > best) best = v;
        }
        out[i] = best;
    }
    return out;
}

/// midpoint Riemann sum of f over [a, b].
template <class F>
double riemann(F&& f, double a, double b, long points) {
    const double w = (b - a) / static_cast<double>(points);
    double acc = 0.0;
    for (long j = 0; j < points; ++j) acc += f(a + (j + 0.5) * w);
    return acc * w;
}

/// min over a dense lambda-grid on [lo, 0].
template <class F>
double grid_min_lambda(F&& f, double lo, long points) {
    double best = 1e300;
    for (long j = 0; j <= points; ++j) {
        const double lam = lo * static_cast<double>(j) / static_cast<double>(points);
        const double v = f(lam);
        if (v < best) best = v;
    }
    return best;
}

}  // namespace oracles
