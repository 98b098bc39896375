#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "ssm/eigenfunction.hpp"
#include "ssm/family_json.hpp"
#include "ssm/gammafun.hpp"
#include "ssm/levy_exponent.hpp"

using namespace ssm;

TEST_CASE("psi closed forms") {
    auto bm = CharacteristicExponent::brownian_drift(1.0);
    CHECK(bm.psi(2.0) == doctest::Approx(4.0).epsilon(1e-15));  // 2^2/2 + 1*2
    CHECK(bm.psi(0.0) == 0.0);

    auto st = CharacteristicExponent::stable(1.0, 1.5);
    CHECK(st.psi(4.0) == doctest::Approx(8.0).epsilon(1e-15));  // 4^1.5
    CHECK(st.psi(0.0) == 0.0);

    auto po = CharacteristicExponent::pochhammer(1.5, 1.0, 0.0);
    CHECK(po.psi(2.0) == doctest::Approx(0.8862269254527580).epsilon(1e-13));
    CHECK(po.psi(0.0) == 0.0);
}

TEST_CASE("mean") {
    CHECK(CharacteristicExponent::brownian_drift(-0.5).mean() == -0.5);
    CHECK(CharacteristicExponent::stable(1.0, 1.5).mean() == 0.0);
    auto po = CharacteristicExponent::pochhammer(1.5, 1.0, 0.0);
    CHECK(po.mean() == doctest::Approx(-1.1816359006036774).epsilon(1e-12));
    // numerical psi'(0+) agrees
    double h = 1e-6;
    CHECK(po.mean() == doctest::Approx((po.psi(h) - po.psi(0.0)) / h).epsilon(1e-4));
}

TEST_CASE("cramer root") {
    auto bm = CharacteristicExponent::brownian_drift(-0.5);
    REQUIRE(bm.cramer_root().has_value());
    CHECK(*bm.cramer_root() == doctest::Approx(1.0).epsilon(1e-12));

    auto po = CharacteristicExponent::pochhammer(1.5, 1.0, 0.0);
    REQUIRE(po.cramer_root().has_value());
    CHECK(*po.cramer_root() == doctest::Approx(1.0).epsilon(1e-10));

    CHECK(!CharacteristicExponent::stable(1.0, 1.5).cramer_root().has_value());
    CHECK(!CharacteristicExponent::brownian_drift(0.3).cramer_root().has_value());
}

TEST_CASE("phi_inverse") {
    auto bm0 = CharacteristicExponent::brownian_drift(0.0);
    CHECK(bm0.phi_inverse(2.0) == doctest::Approx(2.0).epsilon(1e-13));  // psi(u)=u^2/2
    CHECK(bm0.phi_inverse(0.0) == 0.0);
    auto bmn = CharacteristicExponent::brownian_drift(-0.5);
    CHECK(bmn.phi_inverse(0.0) == doctest::Approx(1.0).epsilon(1e-12));  // max(theta,0)

    // stable closed form phi(u) = (c u + g^rho)^{1/rho} - g after a shift
    auto st = CharacteristicExponent::stable(2.0, 1.5);
    for (double lam : {0.1, 1.0, 25.0, 900.0}) {
        double rho = st.phi_inverse(lam);
        CHECK(st.psi(rho) == doctest::Approx(lam).epsilon(1e-11));
    }
    // generic path (pochhammer), inverse consistency on a lambda grid
    auto po = CharacteristicExponent::pochhammer(1.5, 1.0, 0.0);
    double prev = -1.0;
    for (double lam : {0.0, 0.5, 2.0, 50.0, 1000.0}) {
        double rho = po.phi_inverse(lam);
        CHECK(std::fabs(po.psi(rho) - lam) <= 1e-11 * (1.0 + lam));
        CHECK(rho > prev);  // increasing
        prev = rho;
    }
}

TEST_CASE("esscher shift") {
    auto bm = CharacteristicExponent::brownian_drift(0.7);
    auto sh = bm.esscher(0.0);
    CHECK(sh.psi(1.3) == bm.psi(1.3));  // identity at gamma = 0

    auto sh2 = bm.esscher(0.4);
    for (double u : {0.3, 1.0, 4.0}) {
        CHECK(sh2.psi(u) == doctest::Approx(bm.psi(u + 0.4) - bm.psi(0.4)).epsilon(1e-14));
        CHECK(sh2.psi(u) == doctest::Approx(0.5 * u * u + 1.1 * u).epsilon(1e-14));
    }
    CHECK(sh2.psi(0.0) == 0.0);

    // composition adds: (psi_g)_d = psi_{g+d}
    auto po = CharacteristicExponent::pochhammer(1.5, 1.0, 0.0);
    auto once = po.esscher(0.3).esscher(0.2);
    auto both = po.esscher(0.5);
    for (double u : {0.5, 1.0, 2.0})
        CHECK(once.psi(u) == doctest::Approx(both.psi(u)).epsilon(1e-12));
    CHECK(once.gamma_shift() == doctest::Approx(0.5));

    // pochhammer shift maps to the gamma + beta*shift family member
    auto shifted = po.esscher(1.0);
    auto direct = CharacteristicExponent::pochhammer(1.5, 1.0, 1.0);
    for (double u : {0.5, 2.0}) CHECK(shifted.psi(u) == doctest::Approx(direct.psi(u)).epsilon(1e-12));
}

TEST_CASE("psi shape invariants") {
    // psi(0) = 0, convexity, monotone past max(theta, 0)
    for (auto e : {CharacteristicExponent::brownian_drift(-0.5),
                   CharacteristicExponent::stable(1.0, 1.5),
                   CharacteristicExponent::pochhammer(1.5, 1.0, 0.0),
                   CharacteristicExponent::pochhammer(1.7, 0.8, 0.4).esscher(0.3)}) {
        CHECK(e.psi(0.0) == 0.0);
        double lo = e.cramer_root() ? std::max(*e.cramer_root(), 0.0) : 0.0;
        double prev_psi = -1e-12, prev_u = lo;
        for (int i = 0; i <= 40; ++i) {
            double u = lo + i * (100.0 - lo) / 40.0;
            if (i > 0) {
                CHECK(e.psi(u) >= prev_psi - 1e-10);  // increasing past the root
                (void)prev_u;
            }
            prev_psi = e.psi(u);
            prev_u = u;
        }
        // chord condition on a geometric grid in [0, 100]
        for (double u = 0.25; u < 25.0; u *= 2.0) {
            double mid = e.psi(2.0 * u), left = e.psi(u), right = e.psi(4.0 * u);
            CHECK(0.5 * (left + right) >= mid - 1e-9 * (1.0 + std::fabs(mid)));
        }
    }
}

TEST_CASE("custom triplet: validation and quadrature psi") {
    // compound Poisson with exponential density + positive drift
    LevyTriplet t;
    t.b = 1.0;
    t.sigma = 0.5;
    t.pieces.push_back({NuPiece::Kind::exponential, 2.0, 3.0, 0.0, -1.0, {}});
    auto e = CharacteristicExponent::custom(t);
    // psi(u) = b u + sigma/2 u^2 + int (e^{-ur} - 1 + ur 1_{r<=1}) 2 e^{-3r} dr, closed form:
    // int_0^inf (e^{-ur}-1) c e^{-ar} dr = -c u / (a(a+u)); compensation int_0^1 r c e^{-ar} dr
    double u = 1.7, c = 2.0, a = 3.0;
    double comp = c * (1.0 - std::exp(-a) * (1.0 + a)) / (a * a);
    double expect = t.b * u + 0.25 * u * u * 2.0 * 0.5 - c * u / (a * (a + u)) + u * comp;
    CHECK(e.psi(u) == doctest::Approx(expect).epsilon(1e-9));
    // mean = psi'(0) = b - int_1^inf r nu(dr)
    double tail = c * std::exp(-a) * (1.0 + 1.0 / a) / a;
    CHECK(e.mean() == doctest::Approx(t.b - tail).epsilon(1e-9));

    // negative of a subordinator rejected: sigma = 0, finite variation, drift <= 0
    LevyTriplet bad;
    bad.b = 0.1;  // b - int_0^1 r nu < 0
    bad.sigma = 0.0;
    bad.pieces.push_back({NuPiece::Kind::exponential, 2.0, 1.0, 0.0, -1.0, {}});
    CHECK_THROWS_AS((void)CharacteristicExponent::custom(bad), std::domain_error);

    // heavy power tail: mean = -inf is a valid value
    LevyTriplet heavy;
    heavy.b = 2.0;
    heavy.sigma = 1.0;
    heavy.pieces.push_back({NuPiece::Kind::power_law, 0.3, 1.8, 0.0, -1.0, {}});
    auto eh = CharacteristicExponent::custom(heavy);
    CHECK(std::isinf(eh.mean()));
    CHECK(eh.mean() < 0.0);
}

TEST_CASE("regular variation data") {
    auto bm = CharacteristicExponent::brownian_drift(0.3);
    CHECK(bm.regular_variation().beta == 1.0);
    CHECK(bm.regular_variation().l == 0.5);
    auto st = CharacteristicExponent::stable(2.5, 1.5);
    CHECK(st.regular_variation().beta == doctest::Approx(0.5));
    CHECK(st.regular_variation().l == doctest::Approx(2.5));
    auto po = CharacteristicExponent::pochhammer(1.5, 2.0, 0.0);
    CHECK(po.regular_variation().beta == doctest::Approx(0.5));
    CHECK(po.regular_variation().l == doctest::Approx(std::pow(2.0, 1.5) / 1.5));
    // custom: estimated slope, flagged
    LevyTriplet t;
    t.b = 1.0;
    t.sigma = 2.0;
    auto e = CharacteristicExponent::custom(t);
    auto rv = e.regular_variation();
    CHECK(rv.estimated);
    CHECK(rv.beta == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(rv.l == doctest::Approx(1.0).epsilon(1e-2));
}

TEST_CASE("apply_generator") {
    double alpha = 2.0;
    // L x^beta = psi(beta) x^{beta-alpha}
    auto bm = CharacteristicExponent::brownian_drift(1.0);
    SmoothFn cube{[](double x) { return x * x * x; }, [](double x) { return 3.0 * x * x; },
                  [](double x) { return 6.0 * x; }};
    CHECK(bm.apply_generator(cube, 2.0, alpha) == doctest::Approx(bm.psi(3.0) * 2.0).epsilon(1e-12));

    // generator kills constants
    SmoothFn one{[](double) { return 1.0; }, [](double) { return 0.0; }, [](double) { return 0.0; }};
    CHECK(std::fabs(bm.apply_generator(one, 1.3, alpha)) < 1e-12);

    // with jumps: stable family against the monomial eigen-identity
    auto st = CharacteristicExponent::stable(1.0, 1.5);
    for (double beta : {1.0, 2.0, 3.5}) {
        SmoothFn mono{[=](double x) { return std::pow(x, beta); },
                      [=](double x) { return beta * std::pow(x, beta - 1.0); },
                      [=](double x) { return beta * (beta - 1.0) * std::pow(x, beta - 2.0); }};
        for (double x : {0.7, 2.0}) {
            double expect = st.psi(beta) * std::pow(x, beta - alpha);
            CHECK(st.apply_generator(mono, x, alpha) == doctest::Approx(expect).epsilon(1e-7));
        }
    }
    // eigen-relation at the edges of the stated x-range
    {
        Eigenfunction I(st, 1.5);
        double q = 1.0;
        SmoothFn fn{[&](double x) { return I.eval(q * std::pow(x, 1.5)).value; },
                    [&](double x) {
                        double z = q * std::pow(x, 1.5);
                        return I.eval_derivative(z).value * q * 1.5 * std::pow(x, 0.5);
                    },
                    [&](double x) {
                        double z = q * std::pow(x, 1.5);
                        double dz = q * 1.5 * std::pow(x, 0.5);
                        double d2z = q * 0.75 * std::pow(x, -0.5);
                        return I.eval_second_derivative(z).value * dz * dz +
                               I.eval_derivative(z).value * d2z;
                    }};
        for (double x : {0.1, 5.0}) {
            double rhs = q * I.eval(q * std::pow(x, 1.5)).value;
            CHECK(st.apply_generator(fn, x, 1.5) == doctest::Approx(rhs).epsilon(1e-6));
        }
    }
    // pochhammer family too
    auto po = CharacteristicExponent::pochhammer(1.5, 1.0, 0.0);
    {
        double beta = 2.0, x = 1.3;
        SmoothFn mono{[=](double x_) { return std::pow(x_, beta); },
                      [=](double x_) { return beta * std::pow(x_, beta - 1.0); },
                      [=](double x_) { return beta * (beta - 1.0) * std::pow(x_, beta - 2.0); }};
        CHECK(po.apply_generator(mono, x, alpha) ==
              doctest::Approx(po.psi(beta) * std::pow(x, beta - alpha)).epsilon(1e-7));
    }
}

TEST_CASE("family JSON round trips") {
    auto bm = family_from_json(R"({"family":"brownian_drift","gamma":-0.5})");
    CHECK(bm.mean() == -0.5);
    auto st = family_from_json(R"({"family":"stable","rho":1.5,"c":1.0})");
    CHECK(st.psi(4.0) == doctest::Approx(8.0));
    auto po = family_from_json(R"({"family":"pochhammer","rho":1.5,"beta":1.0,"gamma":0.0})");
    CHECK(po.mean() < 0.0);
    auto cu = family_from_json(
        R"({"family":"custom","b":1.0,"sigma":0.5,"nu":[{"kind":"exponential","coef":2.0,"param":3.0}]})");
    CHECK(cu.sigma() == 0.5);

    CHECK_THROWS_AS((void)family_from_json(R"({"family":"stable","rho":1.5})"), ConfigError);
    CHECK_THROWS_AS((void)family_from_json(R"({"gamma":1})"), ConfigError);
    CHECK_THROWS_AS((void)family_from_json("not json"), ConfigError);
    try {
        (void)family_from_json(R"({"family":"stable","rho":1.5})");
    } catch (const ConfigError& ce) {
        CHECK(ce.field == "c");  // error names the offending field
    }
}
