#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "ssm/divisibility.hpp"
#include "ssm/transforms.hpp"

using namespace ssm;

TEST_CASE("complete monotonicity: canonical pass and fail") {
    auto grid = log_grid(1e-2, 1e2, 25);
    // e^{-u}: completely monotone at all orders
    auto rep = complete_monotonicity_check([](double u) { return std::exp(-u); }, grid, 6);
    CHECK(rep.verdict == Verdict::pass);
    for (const auto& m : rep.margins) CHECK(m.min_margin > -kTolCM);

    // 1/(1+u): completely monotone
    rep = complete_monotonicity_check([](double u) { return 1.0 / (1.0 + u); }, grid, 6);
    CHECK(rep.verdict == Verdict::pass);

    // f(u) = u: fails (Delta^1 > 0 so the n=1 signed margin is negative)
    rep = complete_monotonicity_check([](double u) { return u; }, grid, 4, 1e-15, "identity");
    CHECK(rep.verdict == Verdict::fail);
    CHECK(rep.margins[0].min_margin < -kTolCM);

    // sin is nowhere CM
    rep = complete_monotonicity_check([](double u) { return std::sin(u) + 2.0; }, grid, 3);
    CHECK(rep.verdict == Verdict::fail);

    // JSON serialization carries verdicts and margins
    auto js = rep.to_json();
    CHECK(js.find("\"verdict\"") != std::string::npos);
    CHECK(js.find("\"margins\"") != std::string::npos);
}

TEST_CASE("expfun / selfdecomp / id / wolfe / hartman are CM to tested order") {
    auto grid = log_grid(1e-2, 1e2, 25);
    auto e = CharacteristicExponent::brownian_drift(-0.5);
    auto rep = complete_monotonicity_check([&](double u) { return expfun_laplace(e, 2.0, u); }, grid, 6,
                                           1e-12, "expfun brownian(-0.5)");
    CHECK(rep.verdict == Verdict::pass);

    auto st = CharacteristicExponent::stable(1.0, 1.5);
    rep = complete_monotonicity_check([&](double u) { return selfdecomp_laplace(st, 1.5, u); }, grid, 6,
                                      1e-12, "1/I stable");
    CHECK(rep.verdict == Verdict::pass);
    rep = complete_monotonicity_check([&](double u) { return id_laplace(st, 1.5, u, IdKind::combined); },
                                      grid, 6, 1e-12, "combined id stable");
    CHECK(rep.verdict == Verdict::pass);

    // phi_L has a completely monotone derivative: check via first differences of phi_L' proxy,
    // i.e. (-1)^{n-1} Delta^n phi_L <= 0 for n >= 2 <=> Delta phi_L is CM-like.
    auto bm = CharacteristicExponent::brownian_drift(0.0);
    auto dphi = [&](double u) {
        double h = 1e-4 * u;
        return (wolfe_levy_exponent(bm, 2.0, u + h) - wolfe_levy_exponent(bm, 2.0, u)) / h;
    };
    rep = complete_monotonicity_check(dphi, log_grid(1e-1, 1e2, 20), 5, 5e-9, "phi_L' brownian");
    CHECK(rep.verdict != Verdict::fail);

    // hartman ratio in lambda
    rep = complete_monotonicity_check([&](double l) { return hartman_ratio(bm, 2.0, l, 1.0, 2.5); },
                                      log_grid(1e-2, 1e2, 20), 6, 1e-11, "hartman in lambda");
    CHECK(rep.verdict == Verdict::pass);
}

TEST_CASE("selfdecomp residual check") {
    auto grid = log_grid(1e-2, 1e2, 20);
    auto bm = CharacteristicExponent::brownian_drift(0.0);
    auto rep = selfdecomp_check(bm, 2.0, {0.25, 0.5, 0.75}, grid, 6);
    CHECK(rep.verdict == Verdict::pass);
    auto po = CharacteristicExponent::pochhammer(1.5, 1.0, 0.0);
    rep = selfdecomp_check(po, 1.5, {0.5}, grid, 6);
    CHECK(rep.verdict == Verdict::pass);
    // c = 1: ratio is identically 1, trivially CM (margins ~ 0 within tolerance)
    rep = selfdecomp_check(bm, 2.0, {1.0}, grid, 4);
    CHECK(rep.verdict != Verdict::fail);
}

TEST_CASE("gaver-stehfest: exponential pairs") {
    // f(q) = 1/(1+q) -> e^{-t}
    LaplaceTransformFn f;
    f.eval = [](double q) { return 1.0 / (1.0 + q); };
    f.eval_dd = [](dd q) { return dd(1.0) / (q + 1.0); };
    auto t = log_grid(0.1, 5.0, 21);
    auto grid = laplace_invert(f, t, 20);
    CHECK(grid.stable);
    for (size_t i = 0; i < t.size(); ++i) {
        CHECK(std::fabs(grid.density[i] - std::exp(-t[i])) < 1e-6);
    }
    // f(q) = 1/(1+q)^2 -> t e^{-t}
    LaplaceTransformFn f2;
    f2.eval = [](double q) { return 1.0 / ((1.0 + q) * (1.0 + q)); };
    f2.eval_dd = [](dd q) {
        dd d = q + 1.0;
        return dd(1.0) / (d * d);
    };
    grid = laplace_invert(f2, t, 24);  // t e^{-t} peaks mid-grid; needs more terms
    for (size_t i = 0; i < t.size(); ++i) {
        CHECK(std::fabs(grid.density[i] - t[i] * std::exp(-t[i])) < 1e-6);
    }
    // without the dd evaluator, fewer terms still give a rougher inversion
    LaplaceTransformFn f3;
    f3.eval = [](double q) { return 1.0 / (1.0 + q); };
    grid = laplace_invert(f3, t, 12);
    for (size_t i = 0; i < t.size(); ++i) {
        CHECK(std::fabs(grid.density[i] - std::exp(-t[i])) < 1e-3);
    }
}

TEST_CASE("gaver-stehfest: selfdecomp density has mass ~ 1 and is unimodal") {
    auto bm = CharacteristicExponent::brownian_drift(0.0);
    Eigenfunction I(bm, 2.0);
    LaplaceTransformFn f;
    f.eval = [&](double q) { return std::exp(-I.eval(q).log_value); };
    f.eval_dd = [&](dd q) { return dd(1.0) / I.eval_dd(q); };
    auto t = log_grid(0.01, 60.0, 240);
    auto grid = laplace_invert(f, t, 18);
    // nonnegative within tolerance
    for (size_t i = 0; i < t.size(); ++i) CHECK(grid.density[i] > -kTolInv);
    // mass on the grid (trapezoid) close to 1
    double mass = 0.0;
    for (size_t i = 0; i + 1 < t.size(); ++i)
        mass += 0.5 * (grid.density[i] + grid.density[i + 1]) * (t[i + 1] - t[i]);
    CHECK(mass == doctest::Approx(1.0).epsilon(2e-2));
    // kappa_1 under Q_{0+} is self-decomposable, hence unimodal (Wolfe)
    auto uni = unimodality_check(grid);
    CHECK(uni.verdict == Verdict::pass);
    CHECK(uni.mode > 0.0);
}

TEST_CASE("unimodality: synthetic cases") {
    InversionGrid g;
    g.t = log_grid(0.1, 10.0, 60);
    for (double t : g.t) {
        g.density.push_back(std::exp(-t));
        g.error_estimate.push_back(1e-12);
    }
    auto res = unimodality_check(g);
    CHECK(res.verdict == Verdict::pass);
    CHECK(res.mode == doctest::Approx(g.t.front()));  // decreasing: mode at the left edge

    InversionGrid two;
    two.t = log_grid(0.1, 10.0, 120);
    for (double t : two.t) {
        double d = std::exp(-8.0 * (t - 0.5) * (t - 0.5)) + 0.8 * std::exp(-8.0 * (t - 3.0) * (t - 3.0));
        two.density.push_back(d);
        two.error_estimate.push_back(1e-9);
    }
    res = unimodality_check(two);
    CHECK(res.verdict == Verdict::fail);  // two bumps

    InversionGrid noisy;
    noisy.t = {1.0, 2.0, 3.0};
    noisy.density = {1.0, 1.0, 1.0};
    noisy.error_estimate = {10.0, 10.0, 10.0};
    res = unimodality_check(noisy);
    CHECK(res.verdict == Verdict::inconclusive);
}
