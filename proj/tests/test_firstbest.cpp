#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "contractlab/firstbest.hpp"
#include "contractlab/numerics.hpp"
#include "oracles.hpp"

using namespace contractlab;

namespace {
const ModelParams P04 = ModelParams::from_delta(0.4);  // r = 0.1, rho = 0.25
}

TEST_CASE("schedule construction") {
    const FbSchedule f = FbSchedule::front_loaded(3, 0.5, 2.0);
    CHECK(f.taus == std::vector<double>{0.0, 0.5, 1.0});
    const FbSchedule b = FbSchedule::back_loaded(3, 0.5, 2.0);
    CHECK(b.taus == std::vector<double>{0.5, 1.0, 1.5});
    for (const auto& s : {f, b}) {
        for (std::size_t j = 0; j < s.taus.size(); ++j) {
            CHECK(s.taus[j] >= 0.0);
            CHECK(s.taus[j] < 2.0);
            if (j > 0) CHECK(s.taus[j] > s.taus[j - 1]);
        }
    }
    CHECK_THROWS_AS(FbSchedule::front_loaded(3, 0.7, 2.0), std::domain_error);
    CHECK_THROWS_AS(FbSchedule::front_loaded(3, 0.0, 2.0), std::domain_error);
}

TEST_CASE("inner objective at lambda = 0") {
    const FbSchedule sched = FbSchedule::front_loaded(2, 0.5, 2.0);
    const double v = fb_inner_objective(0.0, 0.0, sched, P04);
    CHECK(v == doctest::Approx(4.0 * (1.0 - std::exp(-0.5))).epsilon(1e-10));
    CHECK(v == doctest::Approx(1.573876).epsilon(1e-5));
    CHECK_THROWS_AS(fb_inner_objective(0.5, 0.0, sched, P04), std::domain_error);
    CHECK_THROWS_AS(fb_inner_objective(-1.0, -0.5, sched, P04), std::domain_error);
}

TEST_CASE("one-sided derivative of the integral part at lambda = 0") {
    const double s = 1e-6;
    const double fd = (fb_discount_integral(0.0, P04) - fb_discount_integral(-s, P04)) / s;
    const double expect = cost(P04.a_bar, P04) * (1.0 - std::exp(-P04.r * P04.T));
    CHECK(expect == doctest::Approx(2.17523).epsilon(1e-5));
    CHECK(fd == doctest::Approx(expect).epsilon(1e-6));
}

TEST_CASE("quadrature agrees with a Riemann oracle") {
    const double lam = -1.0;
    const double quad = fb_discount_integral(lam, P04);
    auto integrand = [&](double t) {
        return P04.rho * std::exp(-P04.rho * t) *
               conj_G_star(P04.delta * lam * std::exp((P04.rho - P04.r) * t), P04);
    };
    const double riem = oracles::riemann(integrand, 0.0, P04.T, 1000000);
    CHECK(std::abs(quad - riem) <= 1e-6);
}

TEST_CASE("lambda minimizer on known functions") {
    auto res = minimize_lambda([](double lam) { return (lam + 1.0) * (lam + 1.0); });
    CHECK(res.lambda_star == doctest::Approx(-1.0).epsilon(1e-7));
    CHECK(res.value == doctest::Approx(0.0).epsilon(1e-9));

    res = minimize_lambda([](double lam) { return (lam - 1.0) * (lam - 1.0); });
    CHECK(res.lambda_star == 0.0);
    CHECK(res.value == doctest::Approx(1.0));

    CHECK_THROWS_AS(minimize_lambda([](double lam) { return lam; }), std::runtime_error);
}

TEST_CASE("lambda minimizer against a dense grid scan") {
    const ModelParams Peq = ModelParams::make(3.0, 1.0 / 12.0, 0.25, 0.9, 0.1, 4.0, 2.0, 0.5, 1.0);
    const FbSchedule sched = FbSchedule::front_loaded(0, 0.0, Peq.T);
    auto obj = [&](double lam) { return fb_inner_objective(lam, 0.0, sched, Peq); };
    const auto res = minimize_lambda(obj);
    const double scan = oracles::grid_min_lambda(obj, -8.0, 100000);
    CHECK(res.value <= scan + 1e-8);
    CHECK(res.value == doctest::Approx(scan).epsilon(1e-6));
    CHECK(res.value > 0.0);
    CHECK(res.value < 1.573876);
}

TEST_CASE("bounds coincide when delta*gamma = 1") {
    const ModelParams Peq = ModelParams::make(3.0, 1.0 / 12.0, 0.25, 0.9, 0.1, 4.0, 2.0, 0.5, 1.0);
    for (double R : {0.0, 0.5, 1.0}) {
        const FirstBestBounds b = fb_bounds(R, 2, 0.5, Peq);
        CHECK(b.regime == FbRegime::DeltaGammaEquals1);
        CHECK(std::abs(b.upper - b.lower) <= 1e-8);
        CHECK(b.lambda_lower <= 0.0);
        CHECK(b.lambda_upper <= 0.0);
    }
}

TEST_CASE("bounds ordered and nondegenerate in all regimes") {
    for (double dv : {0.32, 1.0 / 3.0, 1.08}) {
        const ModelParams Pd = ModelParams::from_delta(dv);
        const FirstBestBounds b = fb_bounds(0.0, 2, 0.5, Pd);
        CHECK(b.lower <= b.upper + 1e-9);
        CHECK(b.lower > 1e-3);
        CHECK(b.upper < 1.573876 - 1e-3);
        if (dv * 3.0 > 1.0 + 1e-9) CHECK(b.regime == FbRegime::DeltaGammaAbove1);
        if (dv * 3.0 < 1.0 - 1e-9) CHECK(b.regime == FbRegime::DeltaGammaBelow1);
    }
    const FirstBestBounds b = fb_bounds(0.0, 2, 0.3, ModelParams::from_delta(0.32));
    CHECK(b.lower <= b.upper + 1e-9);
    CHECK_THROWS_AS(fb_bounds(-0.5, 2, 0.5, P04), std::domain_error);
    CHECK_THROWS_AS(fb_bounds(0.0, 2, 1.5, P04), std::domain_error);
}

TEST_CASE("upper bound nonincreasing in R") {
    const ModelParams Pd = ModelParams::from_delta(0.4);
    double prev = 1e300;
    for (int j = 0; j < 20; ++j) {
        const double R = 0.1 * j;
        const FirstBestBounds b = fb_bounds(R, 2, 0.5, Pd);
        CHECK(b.upper <= prev + 1e-9);
        prev = b.upper;
    }
}

TEST_CASE("lower bound nondecreasing in N at delta*gamma = 1") {
    const ModelParams Peq = ModelParams::make(3.0, 1.0 / 12.0, 0.25, 0.9, 0.1, 4.0, 2.0, 0.5, 1.0);
    double prev = -1e300;
    for (int N = 0; N <= 4; ++N) {
        const double zeta = N > 0 ? Peq.T / (2.0 * N) : 0.0;
        const FirstBestBounds b = fb_bounds(0.0, N, zeta, Peq);
        CHECK(b.lower >= prev - 1e-9);
        prev = b.lower;
    }
}

TEST_CASE("front-loading dominates back-loading pointwise when delta*gamma > 1") {
    const ModelParams Pd = ModelParams::from_delta(1.08);
    const FbSchedule front = FbSchedule::front_loaded(2, 0.5, Pd.T);
    const FbSchedule back = FbSchedule::back_loaded(2, 0.5, Pd.T);
    for (double lam : {-0.1, -0.5, -1.0, -2.0, -5.0}) {
        CHECK(fb_inner_objective(lam, 0.0, front, Pd) >=
              fb_inner_objective(lam, 0.0, back, Pd) - 1e-12);
    }
}

TEST_CASE("objective value at the minimizer never exceeds the lambda = 0 value") {
    for (double dv : {0.32, 0.4, 1.08}) {
        const ModelParams Pd = ModelParams::from_delta(dv);
        for (double R : {0.0, 0.7}) {
            const FirstBestBounds b = fb_bounds(R, 2, 0.5, Pd);
            const double at_zero = 4.0 * (1.0 - std::exp(-Pd.rho * Pd.T));
            CHECK(b.lower <= at_zero + 1e-9);
            CHECK(b.upper <= at_zero + 1e-9);
            CHECK(b.lambda_lower <= 0.0);
            CHECK(b.lambda_upper <= 0.0);
        }
    }
}
