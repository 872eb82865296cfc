#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "contractlab/grid.hpp"
#include "contractlab/model.hpp"

namespace contractlab {

/// Policy iteration failed to settle within the round budget.
struct NonconvergenceError : std::runtime_error {
    double residual;
    explicit NonconvergenceError(double res)
        : std::runtime_error("policy iteration did not converge, residual " + std::to_string(res)),
          residual(res) {}
};

/// One value function V^{p,n} on the grid; immutable after solve.
struct ValueSurface {
    int level = 0;
    Grid grid;
    ModelParams params;
    std::vector<double> data;  // (M+1) x (I+1), time-major

    double at(int m, int i) const { return data[static_cast<std::size_t>(m) * (grid.I + 1) + i]; }
    double& at(int m, int i) { return data[static_cast<std::size_t>(m) * (grid.I + 1) + i]; }
    std::span<const double> row(int m) const {
        return {data.data() + static_cast<std::size_t>(m) * (grid.I + 1),
                static_cast<std::size_t>(grid.I + 1)};
    }
};

/// Per-node optimal controls and the penalty's active set. Row M duplicates
/// row M-1 (the policy is held constant over the final step).
struct PolicyField {
    int M = 0;
    int I = 0;
    std::vector<double> z_star;
    std::vector<double> a_star;
    std::vector<unsigned char> active_penalty;

    std::size_t idx(int m, int i) const { return static_cast<std::size_t>(m) * (I + 1) + i; }
    double z(int m, int i) const { return z_star[idx(m, i)]; }
    double a(int m, int i) const { return a_star[idx(m, i)]; }
    bool active(int m, int i) const { return active_penalty[idx(m, i)] != 0; }
};

struct SolvedLevel {
    ValueSurface surface;
    PolicyField policy;
    int dominance_violations = 0;  ///< rows failing the assembly dominance check
};

struct SolverOptions {
    int max_policy_iters = 50;
    double policy_tol = 1e-10;
};

/// Discrete intervention operator: out[i] = sup over grid-aligned offsets of
/// slice[j] - (1+k)(y_i - y_j)^gamma, then one golden-section refinement on
/// [eta* - h, eta* + h] against a cubic-spline reconstruction of the slice.
/// Never below the input slice.
std::vector<double> intervention_M(std::span<const double> slice, const ModelParams& p,
                                   const Grid& grid);

struct ZChoice {
    double z = 0.0;
    double a = 0.0;
    double value = 0.0;
};

/// Maximizes f(z) = r h(a(z)) p + rho a(z) + 0.5 q r^2 sigma^2 z^2 over
/// z in {0} union [h'(0), h'(a_bar)]. Positive q up to 1e-8 is clamped to 0;
/// larger q throws std::runtime_error (the caller should have sanitized).
ZChoice optimize_z(double p, double q, const ModelParams& mp);

struct StepResult {
    std::vector<double> values;
    std::vector<double> z;
    std::vector<double> a;
    std::vector<unsigned char> active;
    int iters = 0;
    int dominance_violations = 0;
};

/// One implicit penalized backward step from u_next (time m+1) to time m, by
/// policy iteration with frozen-policy tridiagonal solves. An empty obstacle
/// span disables the penalty. Dirichlet rows: u[0] = 0, u[I] = boundary_value.
StepResult step_backward(std::span<const double> u_next, std::span<const double> obstacle, int m,
                         const ModelParams& p, const Grid& grid, double eps, double boundary_value,
                         const SolverOptions& opts = {});

/// Solves level n backward from the terminal slice g^n. For n >= 1 the
/// obstacle at t_m is intervention_M of the converged level n-1 slice at t_m.
SolvedLevel solve_level(int n, const ValueSurface* obstacle_surface, const ModelParams& p,
                        const Grid& grid, double eps, const SolverOptions& opts = {});

/// Levels 0..N in sequence, each converged surface feeding the next obstacle.
std::vector<SolvedLevel> solve_recursive(int N, const ModelParams& p, const Grid& grid, double eps,
                                         const SolverOptions& opts = {});

/// No-obstacle backward solve with mandatory interventions: at each scheduled
/// time (snapped to the nearest grid time) the slice is replaced by its
/// intervention_M image before marching on. Times must be increasing in (0,T).
ValueSurface solve_scheduled(const std::vector<double>& times, const ModelParams& p,
                             const Grid& grid, double eps, const SolverOptions& opts = {});

}  // namespace contractlab
