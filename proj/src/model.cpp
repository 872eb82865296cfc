#include "contractlab/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace contractlab {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("ModelParams: ") + what);
}

}  // namespace

ModelParams ModelParams::make(double gamma, double r, double rho, double sigma, double k,
                              double a_bar, double T, double cost_c2, double cost_c1) {
    require(gamma > 2.0, "gamma must exceed 2");
    require(r > 0.0, "r must be positive");
    require(rho > 0.0, "rho must be positive");
    require(sigma > 0.0, "sigma must be positive");
    require(k > 0.0, "k must be positive");
    require(a_bar > 0.0, "a_bar must be positive");
    require(T > 0.0, "T must be positive");
    require(cost_c2 > 0.0, "cost_c2 must be positive");
    require(cost_c1 > 0.0, "cost_c1 must be positive");
    ModelParams p;
    p.gamma = gamma;
    p.r = r;
    p.rho = rho;
    p.sigma = sigma;
    p.k = k;
    p.a_bar = a_bar;
    p.T = T;
    p.cost_c2 = cost_c2;
    p.cost_c1 = cost_c1;
    p.delta = r / rho;
    p.d = rho - r * gamma;
    return p;
}

ModelParams ModelParams::from_delta(double delta_ratio, double rho) {
    return make(3.0, delta_ratio * rho, rho, 0.9, 0.1, 4.0, 2.0, 0.5, 1.0);
}

double utility(double payment, const ModelParams& p) {
    if (payment < 0.0) throw std::domain_error("utility: negative payment");
    return std::pow(payment, 1.0 / p.gamma);
}

double inverse_utility(double y, const ModelParams& p) {
    if (y < 0.0) throw std::domain_error("inverse_utility: negative utility");
    return std::pow(y, p.gamma);
}

double cost(double a, const ModelParams& p) {
    if (a < 0.0 || a > p.a_bar) throw std::domain_error("cost: effort outside [0, a_bar]");
    return p.cost_c2 * a * a + p.cost_c1 * a;
}

double cost_prime(double a, const ModelParams& p) {
    if (a < 0.0 || a > p.a_bar) throw std::domain_error("cost_prime: effort outside [0, a_bar]");
    return 2.0 * p.cost_c2 * a + p.cost_c1;
}

double best_response(double z, const ModelParams& p) {
    return std::clamp((z - p.cost_c1) / (2.0 * p.cost_c2), 0.0, p.a_bar);
}

double hamiltonian_H(double y, double z, const ModelParams& p) {
    const double a = best_response(z, p);
    return p.r * (z * a - y - cost(a, p));
}

double conj_G_star(double p, const ModelParams& mp) {
    if (p > 0.0) throw std::domain_error("conj_G_star: multiplier must be nonpositive");
    if (p == 0.0) return mp.a_bar;
    // objective a + p h(a) is concave in a; vertex at (1 + p c1) / (-2 p c2)
    double a = (1.0 + p * mp.cost_c1) / (-2.0 * p * mp.cost_c2);
    a = std::clamp(a, 0.0, mp.a_bar);
    return a + p * (mp.cost_c2 * a * a + mp.cost_c1 * a);
}

double conj_F_star(double p, double k_eff, const ModelParams& mp) {
    if (p > 0.0) throw std::domain_error("conj_F_star: multiplier must be nonpositive");
    if (k_eff < 0.0) throw std::domain_error("conj_F_star: negative cost rate");
    if (p == 0.0) return 0.0;
    const double g = mp.gamma;
    const double y_star = std::pow(-p / ((1.0 + k_eff) * g), 1.0 / (g - 1.0));
    return (g - 1.0) / g * p * y_star;
}

double terminal_g_coef(int n, const ModelParams& p) {
    const double kappa = std::pow(1.0 + p.k, 1.0 / (p.gamma - 1.0));
    return std::pow(kappa / (static_cast<double>(n) + kappa), p.gamma - 1.0);
}

double terminal_g(int n, double y, const ModelParams& p) {
    return -terminal_g_coef(n, p) * std::pow(y, p.gamma);
}

double envelope_A(int n, double t, const ModelParams& p) {
    if (p.d > 0.0) return terminal_g_coef(n, p);
    const double kappa = std::pow(1.0 + p.k, 1.0 / (p.gamma - 1.0));
    const double s = std::exp(p.d * (t - p.T) / (p.gamma - 1.0));
    return std::pow(kappa / (static_cast<double>(n) * s + kappa), p.gamma - 1.0);
}

double value_lower_bound(int n, double t, double y, const ModelParams& p) {
    return -envelope_A(n, t, p) * std::exp(p.d * (t - p.T)) * std::pow(y, p.gamma);
}

DeltaEnvelope DeltaEnvelope::from_values(double b, double c, double M, int n, const ModelParams& p) {
    DeltaEnvelope env;
    env.b = b;
    env.c = c;
    env.M = M;
    env.log_M = std::log(M);
    env.d = p.d;
    env.n = n;
    return env;
}

namespace {

// g(y) = K / y^{gamma-2} is strictly decreasing on (0, inf); solve g(y) = target.
double solve_threshold(double K, double expo, double target, const char* label) {
    auto g = [&](double y) { return K / std::pow(y, expo); };
    double lo = 1e-12;
    if (g(lo) < target)
        throw std::runtime_error(std::string("build_envelope: cannot bracket ") + label +
                                 " (g(1e-12) already below target)");
    double hi = 1.0;
    while (g(hi) >= target) {
        hi *= 2.0;
        if (hi > 1e300)
            throw std::runtime_error(std::string("build_envelope: cannot bracket ") + label +
                                     " (target never undershot)");
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) >= target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

DeltaEnvelope build_envelope(const ModelParams& p, int N) {
    const double alpha = p.alpha();
    const double beta = p.beta();
    const double habar = cost(p.a_bar, p);
    const double r2s2 = p.r * p.r * p.sigma * p.sigma;

    // min over t of A^{(N,d)}(t) e^{d(t-T)}; absorbs the e^{dT} factors of the
    // d > 0 variant of the admissible set.
    const double A_min = terminal_g_coef(N, p) * (p.d > 0.0 ? std::exp(-p.d * p.T) : 1.0);

    const double c_min = (p.r * habar + std::sqrt(p.r * p.r * habar * habar + 2.0 * r2s2 * beta * beta)) /
                         (r2s2 * beta * beta);
    const double c = 1.05 * c_min;
    const double b = 1.05 * p.r * c;

    const double K = p.rho / (r2s2 * alpha * A_min * p.gamma * (p.gamma - 1.0));
    const double expo = p.gamma - 2.0;
    const double y_lo = solve_threshold(K, expo, alpha * p.a_bar + beta, "y_lo");
    const double y_hi = solve_threshold(K, expo, beta, "y_hi");

    const double log_M1 = std::log(p.rho * p.a_bar) + c * y_lo;
    const double m2_factor = 0.5 * p.rho * K / (alpha * std::pow(y_lo, expo)) - p.rho * beta / alpha;
    double log_M = log_M1;
    if (m2_factor > 0.0) log_M = std::max(log_M, std::log(m2_factor) + p.r * y_hi);
    log_M += std::log(1.05);

    DeltaEnvelope env;
    env.b = b;
    env.c = c;
    env.log_M = log_M;
    env.M = std::exp(log_M);  // may round to +inf; log_M stays authoritative
    env.y_lo = y_lo;
    env.y_hi = y_hi;
    env.d = p.d;
    env.n = N;
    return env;
}

double supersolution_phi(double t, double y, int n, const DeltaEnvelope& env, const ModelParams& p) {
    double bump = 0.0;
    if (y > 0.0) {
        const double e = env.log_M + (p.T - t) * env.b + std::log1p(-std::exp(-env.c * y));
        if (e > 690.0) return 1e300;
        bump = std::exp(e);
    }
    return value_lower_bound(n, t, y, p) + bump;
}

}  // namespace contractlab
