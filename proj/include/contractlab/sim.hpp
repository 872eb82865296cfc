#pragma once

#include <cstdint>
#include <vector>

#include "contractlab/hjb.hpp"
#include "contractlab/scheme.hpp"

namespace contractlab {

struct SimConfig {
    std::int64_t n_paths = 1;
    double dt_sim = 0.0;  ///< 0 means: use the grid step
    std::uint64_t seed = 0;
    double y0 = 1.0;
};

struct PolicyDecision {
    double z = 0.0;
    double a = 0.0;
    bool pay_now = false;
    double eta = 0.0;
    bool truncated = false;  ///< query clamped at y_max
};

/// Feedback policy at (t, y) for `level` remaining rights: bilinear lookup of
/// z* and the bonus size, nearest-node region membership for the trigger.
/// Queries above y_max are clamped and flagged.
PolicyDecision policy_lookup(const std::vector<SolvedLevel>& levels,
                             const std::vector<BonusScheme>& schemes, int level, double t, double y);

struct Histogram {
    double lo = 0.0, hi = 0.0;
    std::vector<std::int64_t> counts;
    void add(double x);
};

struct SimResult {
    double estimate = 0.0;
    double std_error = 0.0;
    std::int64_t n_paths = 0;
    std::int64_t total_bonuses = 0;
    std::int64_t truncation_events = 0;
    Histogram bonus_times;
    Histogram bonus_sizes;
};

/// Euler-Maruyama replay of the extracted feedback policy on the continuation
/// utility SDE, with bonus jumps, absorption at zero, and the discounted
/// principal payoff. Deterministic for fixed (seed, n_paths, dt_sim)
/// regardless of worker count.
SimResult simulate_value(const std::vector<SolvedLevel>& levels,
                         const std::vector<BonusScheme>& schemes, double y0, const SimConfig& cfg,
                         const ModelParams& p, const Grid& grid);

}  // namespace contractlab
