#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "contractlab/hjb.hpp"
#include "oracles.hpp"

using namespace contractlab;

namespace {

const ModelParams P04 = ModelParams::from_delta(0.4);
const Grid G = make_grid(2.0, 40, 100, 2.0);

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

// backward march of the no-obstacle equation from an arbitrary terminal slice;
// used as the limit object for the jump-at-terminal test
ValueSurface march_no_obstacle(const std::vector<double>& terminal, int bound_level,
                               const ModelParams& p, const Grid& grid, double eps) {
    ValueSurface surf;
    surf.level = bound_level;
    surf.grid = grid;
    surf.params = p;
    surf.data.assign(static_cast<std::size_t>(grid.M + 1) * (grid.I + 1), 0.0);
    for (int i = 0; i <= grid.I; ++i) surf.at(grid.M, i) = terminal[i];
    for (int m = grid.M - 1; m >= 0; --m) {
        const double bval = value_lower_bound(bound_level, grid.ts[m], grid.y_max, p);
        const StepResult st = step_backward(surf.row(m + 1), {}, m, p, grid, eps, bval);
        for (int i = 0; i <= grid.I; ++i) surf.at(m, i) = st.values[i];
    }
    return surf;
}

}  // namespace

TEST_CASE("intervention operator basics") {
    const Grid g = make_grid(2.0, 400, 1, 2.0);
    std::vector<double> F(g.I + 1);
    for (int i = 0; i <= g.I; ++i) F[i] = -std::pow(g.ys[i], 3.0);

    const std::vector<double> out = intervention_M(F, P04, g);
    CHECK(out[0] == F[0]);  // only eta = 0 feasible at the origin
    const int i_one = 200;  // y = 1
    CHECK(out[i_one] == doctest::Approx(terminal_g(1, 1.0, P04)).epsilon(2e-3));
    for (int i = 0; i <= g.I; ++i) CHECK(out[i] >= F[i] - 1e-14);

    const std::vector<double> flat(g.I + 1, 0.0);
    const std::vector<double> still = intervention_M(flat, P04, g);
    for (double v : still) CHECK(v == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("iterated intervention reproduces g^n") {
    const Grid g = make_grid(2.0, 400, 1, 2.0);
    std::vector<double> slice(g.I + 1);
    for (int i = 0; i <= g.I; ++i) slice[i] = -std::pow(g.ys[i], 3.0);
    for (int n = 1; n <= 4; ++n) {
        slice = intervention_M(slice, P04, g);
        for (int i = 0; i <= g.I; ++i) {
            const double y = g.ys[i];
            CHECK(std::abs(slice[i] - terminal_g(n, y, P04)) <= 2e-2 * std::pow(y, 3.0) + 1e-12);
        }
    }
}

TEST_CASE("z optimizer on pinned cases") {
    ZChoice zc = optimize_z(0.0, 0.0, P04);
    CHECK(zc.value == doctest::Approx(1.0));  // rho * a_bar
    CHECK(zc.z == doctest::Approx(5.0));
    CHECK(zc.a == doctest::Approx(4.0));

    zc = optimize_z(0.0, -1.0, P04);
    CHECK(zc.value == doctest::Approx(0.89875).epsilon(1e-5));
    CHECK(zc.z == doctest::Approx(5.0).epsilon(1e-6));

    zc = optimize_z(-100.0, -10.0, P04);
    CHECK(zc.z == 0.0);
    CHECK(zc.a == 0.0);
    CHECK(zc.value == 0.0);

    CHECK_THROWS_AS(optimize_z(0.0, 1e-6, P04), std::runtime_error);
    CHECK_NOTHROW(optimize_z(0.0, 5e-9, P04));  // rounding-level convexity clamps to 0
}

TEST_CASE("z optimizer against brute force") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> pdist(-20.0, 20.0), qdist(-10.0, 0.0);
    for (int j = 0; j < 100; ++j) {
        const double p = pdist(rng), q = qdist(rng);
        const ZChoice zc = optimize_z(p, q, P04);
        const double brute =
            oracles::brute_optimize_z(p, q, P04.r, P04.rho, P04.sigma, P04.a_bar, P04.cost_c2,
                                      P04.cost_c1, 6.0, 100000);
        CHECK(std::abs(zc.value - brute) <= 1e-4);
    }
}

TEST_CASE("single implicit step with inactive obstacle") {
    std::vector<double> u_next(G.I + 1, 0.0), obstacle(G.I + 1, -1e9);
    const StepResult st = step_backward(u_next, obstacle, G.M - 1, P04, G, 1e-3, 0.0);
    CHECK(st.values[0] == 0.0);
    CHECK(st.values[G.I] == 0.0);
    const double fixed_point = P04.rho * P04.a_bar * G.dt / (1.0 + P04.rho * G.dt);
    for (int i = G.I / 3; i <= 2 * G.I / 3; ++i)
        CHECK(st.values[i] == doctest::Approx(fixed_point).epsilon(5e-2));
    for (auto a : st.active) CHECK(a == 0);
}

TEST_CASE("single implicit step pinned to an active obstacle") {
    std::vector<double> u_next(G.I + 1, 0.0), obstacle(G.I + 1, 1.0);
    const double eps = 1e-3;
    const StepResult st = step_backward(u_next, obstacle, G.M - 1, P04, G, eps, 0.0);
    // flat-interior fixed point of the penalized balance
    const double u_flat = (P04.rho * P04.a_bar + 1.0 / eps) / (1.0 / G.dt + P04.rho + 1.0 / eps);
    for (int i = G.I / 3; i <= 2 * G.I / 3; ++i)
        CHECK(st.values[i] == doctest::Approx(u_flat).epsilon(2e-3));
    CHECK(st.values[0] == 0.0);  // Dirichlet row wins regardless of the obstacle
}

TEST_CASE("policy iteration round budget is enforced") {
    std::vector<double> u_next(G.I + 1, 0.0);
    SolverOptions opts;
    opts.max_policy_iters = 1;
    CHECK_THROWS_AS(step_backward(u_next, {}, G.M - 1, P04, G, 1e-3, 0.0, opts),
                    NonconvergenceError);
}

TEST_CASE("level 0 terminal and boundary data") {
    const SolvedLevel lvl = solve_level(0, nullptr, P04, G, 1e-3);
    for (int i = 0; i <= G.I; ++i) {
        CHECK(lvl.surface.at(G.M, i) == terminal_g(0, G.ys[i], P04));
        CHECK(lvl.surface.at(G.M, i) == -std::pow(G.ys[i], 3.0));
    }
    for (int m = 0; m <= G.M; ++m) CHECK(lvl.surface.at(m, 0) == 0.0);
    for (double v : lvl.surface.data) CHECK(std::isfinite(v));
}

TEST_CASE("level 1 dominates level 0 and respects the obstacle") {
    const auto levels = solve_recursive(1, P04, G, 1e-3);
    const ValueSurface& v0 = levels[0].surface;
    const ValueSurface& v1 = levels[1].surface;
    double min_gap = 1e300;
    for (int m = 0; m <= G.M; ++m) {
        const std::vector<double> mv0 = intervention_M(v0.row(m), P04, G);
        for (int i = 0; i <= G.I; ++i) {
            min_gap = std::min(min_gap, v1.at(m, i) - mv0[i]);
            CHECK(v1.at(m, i) >= v0.at(m, i) - 1e-8);
        }
    }
    CHECK(min_gap >= -10.0 * 1e-3);
}

TEST_CASE("recursive solve is monotone across levels") {
    const auto levels = solve_recursive(4, P04, G, 1e-3);
    REQUIRE(levels.size() == 5);
    for (int n = 1; n <= 4; ++n) {
        CHECK(levels[n].surface.level == n);
        for (std::size_t j = 0; j < levels[n].surface.data.size(); ++j)
            CHECK(levels[n].surface.data[j] >= levels[n - 1].surface.data[j] - 1e-8);
    }
}

TEST_CASE("policy field is consistent with the best response") {
    const auto levels = solve_recursive(1, P04, G, 1e-3);
    for (const auto& lvl : levels) {
        for (int m = 0; m <= G.M; ++m) {
            for (int i = 0; i <= G.I; ++i) {
                const double z = lvl.policy.z(m, i);
                const double a = lvl.policy.a(m, i);
                CHECK(a == doctest::Approx(best_response(z, P04)).epsilon(1e-12));
                CHECK(a >= 0.0);
                CHECK(a <= P04.a_bar);
                const bool corner = z == 0.0;
                const bool interval = z >= P04.beta() - 1e-12 && z <= P04.h_prime_abar() + 1e-12;
                CHECK((corner || interval));
            }
        }
    }
}

TEST_CASE("empty schedule reproduces the level-0 solve") {
    const ValueSurface sched = solve_scheduled({}, P04, G, 1e-3);
    const SolvedLevel lvl0 = solve_level(0, nullptr, P04, G, 1e-3);
    for (std::size_t j = 0; j < sched.data.size(); ++j)
        CHECK(sched.data[j] == lvl0.surface.data[j]);
}

TEST_CASE("discretionary timing dominates one fixed payment date") {
    const auto levels = solve_recursive(1, P04, G, 1e-3);
    const ValueSurface sched = solve_scheduled({0.5}, P04, G, 1e-3);
    for (int i = 0; i <= G.I; ++i)
        CHECK(levels[1].surface.at(0, i) >= sched.at(0, i) - 1e-3);
}

TEST_CASE("payment forced next to maturity approaches the g^1-terminal march") {
    const double t1 = G.T - G.dt;
    const ValueSurface sched = solve_scheduled({t1}, P04, G, 1e-3);
    std::vector<double> g1(G.I + 1);
    for (int i = 0; i <= G.I; ++i) g1[i] = terminal_g(1, G.ys[i], P04);
    const ValueSurface limit = march_no_obstacle(g1, 1, P04, G, 1e-3);
    for (int i = 0; i <= G.I; ++i)
        CHECK(sched.at(0, i) == doctest::Approx(limit.at(0, i)).epsilon(5e-2));
}

TEST_CASE("scheduled times outside the horizon are rejected") {
    CHECK_THROWS_AS(solve_scheduled({0.0}, P04, G, 1e-3), std::domain_error);
    CHECK_THROWS_AS(solve_scheduled({2.0}, P04, G, 1e-3), std::domain_error);
    CHECK_THROWS_AS(solve_scheduled({0.5, 0.5}, P04, G, 1e-3), std::domain_error);
}

TEST_CASE("penalty tightens monotonically as eps halves") {
    const auto coarse = solve_recursive(1, P04, G, 1e-3);
    const auto fine = solve_recursive(1, P04, G, 5e-4);
    double drift = 0.0;
    for (std::size_t j = 0; j < coarse[1].surface.data.size(); ++j) {
        CHECK(fine[1].surface.data[j] >= coarse[1].surface.data[j] - 1e-6);
        drift = std::max(drift, std::abs(fine[1].surface.data[j] - coarse[1].surface.data[j]));
    }
    MESSAGE("eps-halving drift: ", drift);
    CHECK(drift < 5e-2);
}

TEST_CASE("grid refinement is stable") {
    const auto coarse = solve_recursive(1, P04, G, 1e-3);
    const Grid fine_grid = make_grid(2.0, 80, 200, 2.0);
    const auto fine = solve_recursive(1, P04, fine_grid, 1e-3);
    const double scale = max_abs(coarse[1].surface.data);
    for (int i = 0; i <= G.I; ++i) {
        const double c = coarse[1].surface.at(0, i);
        const double f = fine[1].surface.at(0, 2 * i);
        CHECK(std::abs(c - f) <= 5e-2 * scale);
    }
}

TEST_CASE("surfaces stay inside the analytic envelope") {
    for (double dv : {0.32, 1.08}) {
        const ModelParams Pd = ModelParams::from_delta(dv);
        const auto levels = solve_recursive(2, Pd, G, 1e-3);
        const DeltaEnvelope env = build_envelope(Pd, 2);
        for (int n = 0; n <= 2; ++n) {
            for (int m = 0; m <= G.M; ++m) {
                for (int i = 0; i <= G.I; ++i) {
                    const double v = levels[n].surface.at(m, i);
                    CHECK(v >= value_lower_bound(n, G.ts[m], G.ys[i], Pd) - 1e-6);
                    CHECK(v <= supersolution_phi(G.ts[m], G.ys[i], n, env, Pd) + 1e-6);
                }
            }
        }
    }
}
