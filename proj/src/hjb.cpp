#include "contractlab/hjb.hpp"

#include <algorithm>
#include <cmath>

#include "contractlab/numerics.hpp"

namespace contractlab {

std::vector<double> intervention_M(std::span<const double> slice, const ModelParams& p,
                                   const Grid& grid) {
    const int I = grid.I;
    const double onek = 1.0 + p.k;
    const UniformCubicSpline value(slice, grid.h);
    std::vector<double> out(I + 1);
    for (int i = 0; i <= I; ++i) {
        const double y = grid.ys[i];
        double best = slice[i];  // eta = 0
        double best_eta = 0.0;
        for (int j = i - 1; j >= 0; --j) {
            const double eta = y - grid.ys[j];
            const double v = slice[j] - onek * std::pow(eta, p.gamma);
            if (v > best) {
                best = v;
                best_eta = eta;
            }
        }
        if (i > 0) {
            const double lo = std::max(0.0, best_eta - grid.h);
            const double hi = std::min(y, best_eta + grid.h);
            auto obj = [&](double eta) { return value(y - eta) - onek * std::pow(eta, p.gamma); };
            const auto [eta_ref, v_ref] = golden_max(obj, lo, hi, 1e-12 * std::max(1.0, y));
            (void)eta_ref;
            if (v_ref > best) best = v_ref;
        }
        out[i] = best;
    }
    return out;
}

ZChoice optimize_z(double p, double q, const ModelParams& mp) {
    if (q > 1e-8) throw std::runtime_error("optimize_z: positive curvature (concavity violation)");
    q = std::min(q, 0.0);

    const double zl = mp.beta();           // h'(0)
    const double zh = mp.h_prime_abar();   // h'(a_bar)
    const double diff = 0.5 * q * mp.r * mp.r * mp.sigma * mp.sigma;
    auto f = [&](double z) {
        const double a = best_response(z, mp);
        return mp.r * cost(a, mp) * p + mp.rho * a + diff * z * z;
    };

    ZChoice out;  // z = 0 corner: a = 0, value 0

    // on [zl, zh] the objective is one quadratic in z; golden section only
    // when it is concave, endpoint comparison otherwise
    const double lead = mp.r * p / (4.0 * mp.cost_c2) + diff;
    double z_cand, v_cand;
    if (lead <= 0.0) {
        std::tie(z_cand, v_cand) = golden_max(f, zl, zh, 1e-10 * (zh - zl));
    } else {
        const double fl = f(zl), fh = f(zh);
        if (fh >= fl) {
            z_cand = zh;
            v_cand = fh;
        } else {
            z_cand = zl;
            v_cand = fl;
        }
    }
    // exact endpoints beat an interior golden point on monotone slices
    const double fl = f(zl), fh = f(zh);
    if (fl > v_cand) { z_cand = zl; v_cand = fl; }
    if (fh > v_cand) { z_cand = zh; v_cand = fh; }

    if (v_cand > out.value) {
        out.z = z_cand;
        out.a = best_response(z_cand, mp);
        out.value = v_cand;
    }
    return out;
}

StepResult step_backward(std::span<const double> u_next, std::span<const double> obstacle, int m,
                         const ModelParams& p, const Grid& grid, double eps, double boundary_value,
                         const SolverOptions& opts) {
    (void)m;
    const int I = grid.I;
    const bool has_obstacle = !obstacle.empty();
    const double inv_dt = 1.0 / grid.dt;
    const double inv_eps = 1.0 / eps;
    const double r2s2 = p.r * p.r * p.sigma * p.sigma;

    StepResult res;
    res.values.assign(u_next.begin(), u_next.end());
    res.z.assign(I + 1, 0.0);
    res.a.assign(I + 1, 0.0);
    res.active.assign(I + 1, 0);

    std::vector<double> sub(I + 1), diag(I + 1), sup(I + 1), rhs(I + 1);
    std::vector<double>& u = res.values;

    for (int round = 1; round <= opts.max_policy_iters; ++round) {
        // policy improvement at the current iterate's difference quotients
        for (int i = 1; i < I; ++i) {
            const Stencil s = stencils(u, i, grid.h);
            const ZChoice zc = optimize_z(s.dy, std::min(s.dyy, 0.0), p);
            res.z[i] = zc.z;
            res.a[i] = zc.a;
            res.active[i] =
                static_cast<unsigned char>(has_obstacle && obstacle[i] - u[i] > 0.0);
        }

        // frozen-policy linear system
        res.dominance_violations = 0;
        sub[0] = 0.0; diag[0] = 1.0; sup[0] = 0.0; rhs[0] = 0.0;
        sub[I] = 0.0; diag[I] = 1.0; sup[I] = 0.0; rhs[I] = boundary_value;
        for (int i = 1; i < I; ++i) {
            const double C = p.r * (grid.ys[i] + cost(res.a[i], p)) / (2.0 * grid.h);
            const double D = 0.5 * r2s2 * res.z[i] * res.z[i] / (grid.h * grid.h);
            const double pen = res.active[i] ? inv_eps : 0.0;
            diag[i] = inv_dt + p.rho + pen + 2.0 * D;
            sub[i] = C - D;
            sup[i] = -C - D;
            rhs[i] = u_next[i] * inv_dt + p.rho * res.a[i] + (res.active[i] ? pen * obstacle[i] : 0.0);
            if (std::abs(sub[i]) + std::abs(sup[i]) > diag[i]) ++res.dominance_violations;
        }

        std::vector<double> u_new = solve_tridiagonal(sub, diag, sup, rhs);
        double delta = 0.0;
        for (int i = 0; i <= I; ++i) delta = std::max(delta, std::abs(u_new[i] - u[i]));
        u = std::move(u_new);
        res.iters = round;
        if (delta <= opts.policy_tol) {
            res.z[0] = 0.0;
            res.a[0] = 0.0;
            res.z[I] = res.z[I - 1];
            res.a[I] = res.a[I - 1];
            return res;
        }
        if (round == opts.max_policy_iters) throw NonconvergenceError(delta);
    }
    throw NonconvergenceError(0.0);  // unreachable
}

SolvedLevel solve_level(int n, const ValueSurface* obstacle_surface, const ModelParams& p,
                        const Grid& grid, double eps, const SolverOptions& opts) {
    const int I = grid.I, M = grid.M;
    SolvedLevel out;
    out.surface.level = n;
    out.surface.grid = grid;
    out.surface.params = p;
    out.surface.data.assign(static_cast<std::size_t>(M + 1) * (I + 1), 0.0);
    out.policy.M = M;
    out.policy.I = I;
    out.policy.z_star.assign(out.surface.data.size(), 0.0);
    out.policy.a_star.assign(out.surface.data.size(), 0.0);
    out.policy.active_penalty.assign(out.surface.data.size(), 0);

    for (int i = 0; i <= I; ++i) out.surface.at(M, i) = terminal_g(n, grid.ys[i], p);

    std::vector<double> obstacle;
    for (int m = M - 1; m >= 0; --m) {
        std::span<const double> obs_span;
        if (obstacle_surface != nullptr) {
            obstacle = intervention_M(obstacle_surface->row(m), p, grid);
            obs_span = obstacle;
        }
        // truncation data: the zero-control bound, raised to the intervention
        // value when paying immediately at y_max beats it (still a lower bound
        // of the true value, and keeps the boundary row obstacle-consistent)
        double bval = value_lower_bound(n, grid.ts[m], grid.y_max, p);
        if (!obstacle.empty()) bval = std::max(bval, obstacle[grid.I]);
        const StepResult step =
            step_backward(out.surface.row(m + 1), obs_span, m, p, grid, eps, bval, opts);
        out.dominance_violations += step.dominance_violations;
        for (int i = 0; i <= I; ++i) {
            // project onto the zero-control bound: the exact solution dominates
            // it, while the central drift stencil undershoots by O(h^2) near y_max
            out.surface.at(m, i) =
                std::max(step.values[i], value_lower_bound(n, grid.ts[m], grid.ys[i], p));
            out.policy.z_star[out.policy.idx(m, i)] = step.z[i];
            out.policy.a_star[out.policy.idx(m, i)] = step.a[i];
            out.policy.active_penalty[out.policy.idx(m, i)] = step.active[i];
        }
    }
    for (int i = 0; i <= I; ++i) {
        out.policy.z_star[out.policy.idx(M, i)] = out.policy.z(M - 1, i);
        out.policy.a_star[out.policy.idx(M, i)] = out.policy.a(M - 1, i);
    }
    return out;
}

std::vector<SolvedLevel> solve_recursive(int N, const ModelParams& p, const Grid& grid, double eps,
                                         const SolverOptions& opts) {
    if (N < 0) throw std::domain_error("solve_recursive: N must be nonnegative");
    std::vector<SolvedLevel> levels;
    levels.reserve(N + 1);
    levels.push_back(solve_level(0, nullptr, p, grid, eps, opts));
    for (int n = 1; n <= N; ++n)
        levels.push_back(solve_level(n, &levels[n - 1].surface, p, grid, eps, opts));
    return levels;
}

ValueSurface solve_scheduled(const std::vector<double>& times, const ModelParams& p,
                             const Grid& grid, double eps, const SolverOptions& opts) {
    for (std::size_t s = 0; s < times.size(); ++s) {
        if (!(times[s] > 0.0 && times[s] < p.T))
            throw std::domain_error("solve_scheduled: times must lie in (0, T)");
        if (s > 0 && times[s] <= times[s - 1])
            throw std::domain_error("solve_scheduled: times must be strictly increasing");
    }
    const int I = grid.I, M = grid.M;
    // snap to nearest grid times
    std::vector<int> hits(M + 1, 0);
    for (double t : times) {
        const int m = std::clamp(static_cast<int>(std::lround(t / grid.dt)), 1, M - 1);
        ++hits[m];
    }

    ValueSurface surf;
    surf.level = 0;
    surf.grid = grid;
    surf.params = p;
    surf.data.assign(static_cast<std::size_t>(M + 1) * (I + 1), 0.0);
    for (int i = 0; i <= I; ++i) surf.at(M, i) = terminal_g(0, grid.ys[i], p);

    // payments strictly after t_m still pending at time m
    std::vector<int> remaining(M + 1, 0);
    for (int m = M - 1; m >= 0; --m) remaining[m] = remaining[m + 1] + hits[m + 1];

    std::vector<double> row(I + 1);
    for (int m = M - 1; m >= 0; --m) {
        const double bval = value_lower_bound(remaining[m], grid.ts[m], grid.y_max, p);
        const StepResult step = step_backward(surf.row(m + 1), {}, m, p, grid, eps, bval, opts);
        row = step.values;
        // forgoing every mandatory payment (eta = 0) and all effort is still
        // admissible here, so the level-0 bound applies
        for (int i = 0; i <= I; ++i)
            row[i] = std::max(row[i], value_lower_bound(0, grid.ts[m], grid.ys[i], p));
        for (int hit = 0; hit < hits[m]; ++hit) {
            std::vector<double> jumped = intervention_M(row, p, grid);
            row = std::move(jumped);
        }
        for (int i = 0; i <= I; ++i) surf.at(m, i) = row[i];
    }
    return surf;
}

}  // namespace contractlab
