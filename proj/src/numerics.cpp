#include "contractlab/numerics.hpp"

#include <algorithm>
#include <cstddef>

namespace contractlab {

std::vector<double> solve_tridiagonal(const std::vector<double>& sub, const std::vector<double>& diag,
                                      const std::vector<double>& sup, const std::vector<double>& rhs) {
    const std::size_t n = diag.size();
    std::vector<double> c(n), d(n), x(n);
    double piv = diag[0];
    if (std::abs(piv) < 1e-300) throw std::runtime_error("solve_tridiagonal: singular pivot");
    c[0] = sup[0] / piv;
    d[0] = rhs[0] / piv;
    for (std::size_t i = 1; i < n; ++i) {
        piv = diag[i] - sub[i] * c[i - 1];
        if (std::abs(piv) < 1e-300) throw std::runtime_error("solve_tridiagonal: singular pivot");
        c[i] = (i + 1 < n) ? sup[i] / piv : 0.0;
        d[i] = (rhs[i] - sub[i] * d[i - 1]) / piv;
    }
    x[n - 1] = d[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
    return x;
}

UniformCubicSpline::UniformCubicSpline(std::span<const double> values, double h)
    : f_(values.begin(), values.end()), h_(h) {
    const std::size_t n = f_.size();
    sigma_.assign(n, 0.0);
    if (n < 3) return;
    std::vector<double> sub(n, 1.0), diag(n, 4.0), sup(n, 1.0), rhs(n, 0.0);
    diag[0] = diag[n - 1] = 1.0;
    sub[n - 1] = 0.0;
    sup[0] = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i)
        rhs[i] = 6.0 * (f_[i + 1] - 2.0 * f_[i] + f_[i - 1]) / (h_ * h_);
    sigma_ = solve_tridiagonal(sub, diag, sup, rhs);
}

double UniformCubicSpline::operator()(double x) const {
    const int last = static_cast<int>(f_.size()) - 1;
    if (last < 1) return f_.empty() ? 0.0 : f_[0];
    const double pos = std::clamp(x / h_, 0.0, static_cast<double>(last));
    const int i = std::min(static_cast<int>(pos), last - 1);
    const double s = pos - i;
    const double t = 1.0 - s;
    return f_[i] * t + f_[i + 1] * s +
           h_ * h_ / 6.0 * ((t * t * t - t) * sigma_[i] + (s * s * s - s) * sigma_[i + 1]);
}

}  // namespace contractlab
