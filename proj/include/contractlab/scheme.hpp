#pragma once

#include <span>
#include <string>
#include <vector>

#include "contractlab/hjb.hpp"

namespace contractlab {

/// Smallest maximizer of eta -> prev_slice(y - eta) - (1+k) eta^gamma over
/// [0, y] at node y_index: grid argmax plus one golden-section refinement
/// against a cubic-spline reconstruction of the slice.
double extract_eta(std::span<const double> prev_slice, int y_index, const ModelParams& p,
                   const Grid& grid);

/// Optimal bonus payments for one level and the region where they occur.
/// eta is zero outside the region; eta_raw keeps the unmasked argmax values
/// (used for interpolation by the simulator).
struct BonusScheme {
    int level = 0;
    int M = 0;
    int I = 0;
    std::vector<double> eta;
    std::vector<double> eta_raw;
    std::vector<unsigned char> region;

    std::size_t idx(int m, int i) const { return static_cast<std::size_t>(m) * (I + 1) + i; }
    bool in_region(int m, int i) const { return region[idx(m, i)] != 0; }
};

/// Region mask: |Vn - MVprev| <= tol (1 + |Vn|) and eta_raw > h/2.
std::vector<unsigned char> intervention_region(const ValueSurface& Vn,
                                               const std::vector<double>& MVprev,
                                               const std::vector<double>& eta_raw, double tol);

/// Assembles eta, eta_raw and the region mask for level Vn.level from the
/// previous-level surface. Call sites default tol to the penalization eps
/// (measured contact gaps sit two decades below it).
BonusScheme make_bonus_scheme(const ValueSurface& Vn, const ValueSurface& Vprev, double tol);

struct DiagnosticsReport {
    double max_concavity_violation = 0.0;   ///< max positive raw second difference
    double max_abs_value = 0.0;
    double max_obstacle_residual = 0.0;     ///< max of (MV^{n-1} - V^n)^+
    long monotonicity_violations = 0;       ///< nodes with V^n < V^{n-1} - 1e-8
    long no_firing_violations = 0;          ///< nodes with eta_raw >= y
    std::vector<long> eta_monotonicity_flips;  ///< per level >= 1: decreasing steps of eta(t,.) inside the region
    std::vector<bool> golden_hello;            ///< per level >= 1: region nonempty at t = 0
    std::vector<double> min_region_y_t0;       ///< per level >= 1: smallest region y at t = 0 (-1 if empty)
    int dominance_violations = 0;

    std::string to_text() const;
};

DiagnosticsReport diagnostics(const std::vector<SolvedLevel>& levels,
                              const std::vector<BonusScheme>& schemes, const ModelParams& p);

}  // namespace contractlab
