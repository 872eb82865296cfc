#include "contractlab/firstbest.hpp"

#include <cmath>
#include <stdexcept>

#include "contractlab/numerics.hpp"

namespace contractlab {

const char* to_string(FbRegime regime) {
    switch (regime) {
        case FbRegime::DeltaGammaAbove1: return "deltaGammaAbove1";
        case FbRegime::DeltaGammaBelow1: return "deltaGammaBelow1";
        case FbRegime::DeltaGammaEquals1: return "deltaGammaEquals1";
    }
    return "unknown";
}

namespace {

void check_zeta(int N, double zeta, double T) {
    if (N < 0) throw std::domain_error("FbSchedule: N must be nonnegative");
    if (N > 0 && !(zeta > 0.0 && zeta < T / N))
        throw std::domain_error("FbSchedule: zeta must lie in (0, T/N)");
}

}  // namespace

FbSchedule FbSchedule::front_loaded(int N, double zeta, double T) {
    check_zeta(N, zeta, T);
    FbSchedule s;
    s.zeta = zeta;
    s.direction = FbDirection::FrontLoaded;
    for (int i = 1; i <= N; ++i) s.taus.push_back((i - 1) * zeta);
    return s;
}

FbSchedule FbSchedule::back_loaded(int N, double zeta, double T) {
    check_zeta(N, zeta, T);
    FbSchedule s;
    s.zeta = zeta;
    s.direction = FbDirection::BackLoaded;
    for (int i = 1; i <= N; ++i) s.taus.push_back(T - (N + 1 - i) * zeta);
    return s;
}

double fb_discount_integral(double lambda, const ModelParams& p) {
    if (lambda > 0.0) throw std::domain_error("fb_discount_integral: lambda must be nonpositive");
    auto integrand = [&](double t) {
        return p.rho * std::exp(-p.rho * t) * conj_G_star(p.delta * lambda * std::exp((p.rho - p.r) * t), p);
    };
    return adaptive_simpson(integrand, 0.0, p.T, 1e-10);
}

double fb_inner_objective(double lambda, double R, const FbSchedule& schedule, const ModelParams& p) {
    if (lambda > 0.0) throw std::domain_error("fb_inner_objective: lambda must be nonpositive");
    if (R < 0.0) throw std::domain_error("fb_inner_objective: R must be nonnegative");
    double val = lambda * utility(R, p);
    for (double tau : schedule.taus)
        val -= std::exp(-p.rho * tau) * conj_F_star(lambda * std::exp((p.rho - p.r) * tau), p.k, p);
    val -= std::exp(-p.rho * p.T) * conj_F_star(lambda * std::exp((p.rho - p.r) * p.T), 0.0, p);
    val += fb_discount_integral(lambda, p);
    return val;
}

MinimizeResult minimize_lambda(const std::function<double(double)>& objective) {
    const double f0 = objective(0.0);
    // convexity: nonpositive one-sided derivative at 0 pins the minimum there
    if (objective(-1e-9) >= f0) return {0.0, f0};

    double big = 1.0;
    const double limit = std::ldexp(1.0, 60);
    while (objective(-big) < objective(-0.5 * big)) {
        big *= 2.0;
        if (big > limit) throw std::runtime_error("minimize_lambda: objective unbounded below");
    }
    auto [lam, val] = golden_min(objective, -big, 0.0, 1e-10);
    if (f0 < val) return {0.0, f0};
    return {lam, val};
}

FirstBestBounds fb_bounds(double R, int N, double zeta, const ModelParams& p) {
    if (R < 0.0) throw std::domain_error("fb_bounds: R must be nonnegative");
    check_zeta(N, zeta, p.T);

    const double dg = p.delta * p.gamma;
    FirstBestBounds out;
    if (std::abs(dg - 1.0) <= 1e-12)
        out.regime = FbRegime::DeltaGammaEquals1;
    else if (dg > 1.0)
        out.regime = FbRegime::DeltaGammaAbove1;
    else
        out.regime = FbRegime::DeltaGammaBelow1;

    const FbSchedule schedule = (out.regime == FbRegime::DeltaGammaBelow1)
                                    ? FbSchedule::back_loaded(N, zeta, p.T)
                                    : FbSchedule::front_loaded(N, zeta, p.T);
    auto lower_obj = [&](double lam) { return fb_inner_objective(lam, R, schedule, p); };
    const MinimizeResult lo = minimize_lambda(lower_obj);
    out.lower = lo.value;
    out.lambda_lower = lo.lambda_star;

    if (out.regime == FbRegime::DeltaGammaEquals1) {
        // every admissible timing gives the same value; bounds coincide
        out.upper = out.lower;
        out.lambda_upper = out.lambda_lower;
        return out;
    }

    auto upper_obj = [&](double lam) {
        double val = lam * utility(R, p);
        if (out.regime == FbRegime::DeltaGammaAbove1) {
            val -= N * conj_F_star(lam, p.k, p);
        } else {
            val -= N * std::exp(-p.rho * p.T) *
                   conj_F_star(lam * std::exp((p.rho - p.r) * p.T), p.k, p);
        }
        val -= std::exp(-p.rho * p.T) * conj_F_star(lam * std::exp((p.rho - p.r) * p.T), 0.0, p);
        val += fb_discount_integral(lam, p);
        return val;
    };
    const MinimizeResult up = minimize_lambda(upper_obj);
    out.upper = up.value;
    out.lambda_upper = up.lambda_star;
    return out;
}

}  // namespace contractlab
