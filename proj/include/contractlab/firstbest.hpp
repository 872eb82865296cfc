#pragma once

#include <functional>
#include <vector>

#include "contractlab/model.hpp"

namespace contractlab {

enum class FbDirection { FrontLoaded, BackLoaded };
enum class FbRegime { DeltaGammaAbove1, DeltaGammaBelow1, DeltaGammaEquals1 };

const char* to_string(FbRegime regime);

/// Deterministic bonus-payment times tau_1 < ... < tau_N in [0, T).
struct FbSchedule {
    std::vector<double> taus;
    double zeta = 0.0;
    FbDirection direction = FbDirection::FrontLoaded;

    /// tau_i = (i-1) zeta; requires 0 < zeta < T/N when N > 0.
    static FbSchedule front_loaded(int N, double zeta, double T);
    /// tau_i = T - (N+1-i) zeta; requires 0 < zeta < T/N when N > 0.
    static FbSchedule back_loaded(int N, double zeta, double T);
};

struct FirstBestBounds {
    double lower = 0.0;
    double upper = 0.0;
    double lambda_lower = 0.0;
    double lambda_upper = 0.0;
    FbRegime regime = FbRegime::DeltaGammaEquals1;
};

/// Time integral of rho e^{-rho t} G*(delta lambda e^{(rho-r)t}) over [0, T],
/// by adaptive Simpson to absolute tolerance 1e-10.
double fb_discount_integral(double lambda, const ModelParams& p);

/// The dual objective whose infimum over lambda <= 0 bounds the first-best value:
/// lambda u(R) - sum_i e^{-rho tau_i} F^{*,k}(lambda e^{(rho-r) tau_i})
///             - e^{-rho T} F^{*,0}(lambda e^{(rho-r) T}) + fb_discount_integral.
double fb_inner_objective(double lambda, double R, const FbSchedule& schedule, const ModelParams& p);

struct MinimizeResult {
    double lambda_star = 0.0;
    double value = 0.0;
};

/// Minimizes a convex objective over (-inf, 0]: geometric bracket growth,
/// then golden section to bracket width 1e-10. Throws std::runtime_error if
/// the bracket exceeds 2^60 (objective unbounded below).
MinimizeResult minimize_lambda(const std::function<double(double)>& objective);

/// First-best value bounds at reservation payment R with N flexibly timed
/// bonuses. The lower bound optimizes the constructive schedule for the
/// regime; the upper bound uses the relaxed expressions. At delta*gamma == 1
/// (tolerance 1e-12) the two coincide and are returned equal.
FirstBestBounds fb_bounds(double R, int N, double zeta, const ModelParams& p);

}  // namespace contractlab
