#pragma once

#include <stdexcept>

namespace contractlab {

/// Economic primitives of the contracting model. `delta` (= r/rho) and
/// `d` (= rho - r*gamma) are derived at construction and kept consistent.
struct ModelParams {
    double gamma = 3.0;     ///< agent risk aversion exponent, > 2
    double r = 0.1;         ///< agent discount rate
    double rho = 0.25;      ///< principal discount rate
    double sigma = 0.9;     ///< output volatility
    double k = 0.1;         ///< transaction cost rate on bonus payments
    double a_bar = 4.0;     ///< maximal effort
    double T = 2.0;         ///< contract horizon
    double cost_c2 = 0.5;   ///< quadratic effort-cost coefficient
    double cost_c1 = 1.0;   ///< linear effort-cost coefficient
    double delta = 0.4;     ///< derived: r / rho
    double d = 0.0;         ///< derived: rho - r * gamma

    static ModelParams make(double gamma, double r, double rho, double sigma, double k,
                            double a_bar, double T, double cost_c2, double cost_c1);

    /// Impatience-ratio parametrization: rho fixed, r = delta_ratio * rho.
    static ModelParams from_delta(double delta_ratio, double rho = 0.25);

    double beta() const { return cost_c1; }              // h'(0)
    double alpha() const { return 2.0 * cost_c2; }       // h''(0)
    double h_prime_abar() const { return 2.0 * cost_c2 * a_bar + cost_c1; }
};

/// u(x) = x^{1/gamma}, the agent's utility of a payment x >= 0.
double utility(double payment, const ModelParams& p);

/// u^{-1}(y) = y^gamma; throws std::domain_error for y < 0.
double inverse_utility(double y, const ModelParams& p);

/// h(a) = c2 a^2 + c1 a on [0, a_bar]; throws std::domain_error outside.
double cost(double a, const ModelParams& p);

/// h'(a) = 2 c2 a + c1 on [0, a_bar]; throws std::domain_error outside.
double cost_prime(double a, const ModelParams& p);

/// Smallest maximizer of a -> z*a - h(a) over [0, a_bar].
double best_response(double z, const ModelParams& p);

/// H(y, z) = sup_a r (z a - y - h(a)), attained at best_response(z).
double hamiltonian_H(double y, double z, const ModelParams& p);

/// G*(p) = sup_{a in [0, a_bar]} (a + h(a) p) for p <= 0; throws for p > 0.
double conj_G_star(double p, const ModelParams& mp);

/// F^{*,k}(p) = inf_{y >= 0} (y p + (1 + k_eff) y^gamma) for p <= 0; throws for p > 0.
double conj_F_star(double p, double k_eff, const ModelParams& mp);

/// Coefficient of -y^gamma in g^n: ((1+k)^{1/(g-1)} / (n + (1+k)^{1/(g-1)}))^{g-1}.
double terminal_g_coef(int n, const ModelParams& p);

/// g^n(y), the terminal value after n residual intervention rights.
double terminal_g(int n, double y, const ModelParams& p);

/// A^{(n,d)}(t): the coefficient of the analytic value bounds. Constant in t
/// when d > 0, time-varying when d <= 0.
double envelope_A(int n, double t, const ModelParams& p);

/// -A^{(n,d)}(t) e^{d(t-T)} y^gamma, the zero-control lower bound on V^{p,n}.
double value_lower_bound(int n, double t, double y, const ModelParams& p);

/// Parameters (b, c, M) of the explicit supersolution, with the thresholds
/// y_lo/y_hi of the admissible set they were derived from. M can overflow a
/// double at realistic parameters, so log_M is the authoritative field.
struct DeltaEnvelope {
    double b = 0.0;
    double c = 0.0;
    double M = 0.0;
    double log_M = 0.0;
    double y_lo = 0.0;
    double y_hi = 0.0;
    double d = 0.0;
    int n = 0;

    static DeltaEnvelope from_values(double b, double c, double M, int n, const ModelParams& p);
};

/// Smallest admissible (b, c, M), inflated 5% to keep the inequalities strict
/// under floating point. Throws std::runtime_error when the threshold root
/// find cannot bracket (with a diagnostic message).
DeltaEnvelope build_envelope(const ModelParams& p, int N);

/// phi(t, y) = -A^{(n,d)}(t) e^{d(t-T)} y^gamma + M e^{(T-t)b} (1 - e^{-cy}),
/// evaluated in log space and capped at 1e300 to survive huge M.
double supersolution_phi(double t, double y, int n, const DeltaEnvelope& env, const ModelParams& p);

}  // namespace contractlab
