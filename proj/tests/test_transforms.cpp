#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "ssm/gammafun.hpp"
#include "ssm/special_cases.hpp"
#include "ssm/transforms.hpp"

using namespace ssm;

TEST_CASE("fpt_up_laplace") {
    auto e = CharacteristicExponent::brownian_drift(0.0);
    CHECK(fpt_up_laplace(e, 2.0, 0.0, 1.0, 2.0) == 1.0);  // q = 0: upper points recurrent
    CHECK(fpt_up_laplace(e, 2.0, 1.3, 2.0, 2.0) == 1.0);  // x = a
    // Bessel oracle: I_0(sqrt 2)/I_0(sqrt 8)
    double expect = bessel_I(0, std::sqrt(2.0)) / bessel_I(0, std::sqrt(8.0));
    CHECK(fpt_up_laplace(e, 2.0, 1.0, 1.0, 2.0) == doctest::Approx(expect).epsilon(1e-12));
    // decreasing in q, increasing in x
    CHECK(fpt_up_laplace(e, 2.0, 2.0, 1.0, 2.0) < fpt_up_laplace(e, 2.0, 1.0, 1.0, 2.0));
    CHECK(fpt_up_laplace(e, 2.0, 1.0, 1.5, 2.0) > fpt_up_laplace(e, 2.0, 1.0, 1.0, 2.0));
    CHECK_THROWS(fpt_up_laplace(e, 2.0, 1.0, 3.0, 2.0));  // x > a

    // semigroup telescoping
    double xa = fpt_up_laplace(e, 2.0, 1.0, 0.5, 1.2);
    double ab = fpt_up_laplace(e, 2.0, 1.0, 1.2, 2.4);
    double xb = fpt_up_laplace(e, 2.0, 1.0, 0.5, 2.4);
    CHECK(xa * ab == doctest::Approx(xb).epsilon(1e-13));

    // scaling identity: value(cx, ca, q) = value(x, a, q c^alpha)
    double c = 1.7;
    CHECK(fpt_up_laplace(e, 2.0, 1.0, c * 1.0, c * 2.0) ==
          doctest::Approx(fpt_up_laplace(e, 2.0, std::pow(c, 2.0), 1.0, 2.0)).epsilon(1e-13));

    // in [0,1] on the admissible families
    for (auto ee : {CharacteristicExponent::stable(1.0, 1.5),
                    CharacteristicExponent::pochhammer(1.5, 1.0, 0.0)}) {
        double alpha = 1.5;
        for (double q : {0.3, 2.0}) {
            double v = fpt_up_laplace(ee, alpha, q, 0.7, 1.9);
            CHECK(v > 0.0);
            CHECK(v <= 1.0);
        }
    }
}

TEST_CASE("fpt_joint_laplace") {
    auto e = CharacteristicExponent::brownian_drift(0.0);
    // lambda = 0, mean >= 0: reduces to fpt_up_laplace
    CHECK(fpt_joint_laplace(e, 2.0, 1.0, 0.0, 1.0, 2.0) ==
          doctest::Approx(fpt_up_laplace(e, 2.0, 1.0, 1.0, 2.0)).epsilon(1e-13));
    // q = 0: (x/a)^rho
    double rho = e.phi_inverse(1.0);
    CHECK(fpt_joint_laplace(e, 2.0, 0.0, 1.0, 1.0, 2.0) ==
          doctest::Approx(std::pow(0.5, rho)).epsilon(1e-13));
    // x = 0 with rho > 0
    CHECK(fpt_joint_laplace(e, 2.0, 1.0, 1.0, 0.0, 2.0) == 0.0);
    double v = fpt_joint_laplace(e, 2.0, 1.0, 1.0, 1.0, 2.0);
    CHECK(v > 0.0);
    CHECK(v < 1.0);
}

TEST_CASE("levy_fpt_functional_laplace consistency with the joint transform") {
    auto e = CharacteristicExponent::brownian_drift(0.0);
    CHECK(levy_fpt_functional_laplace(e, 2.0, 1.0, 1.0, 0.7, 0.7) == 1.0);  // x = a
    double rho = e.phi_inverse(2.0);
    CHECK(levy_fpt_functional_laplace(e, 2.0, 0.0, 2.0, -0.4, 0.9) ==
          doctest::Approx(std::exp(rho * (-0.4 - 0.9))).epsilon(1e-13));
    // equals fpt_joint_laplace with x -> e^x, a -> e^a
    double x = -0.2, a = 0.8, q = 1.3, lam = 0.6;
    CHECK(levy_fpt_functional_laplace(e, 2.0, q, lam, x, a) ==
          doctest::Approx(fpt_joint_laplace(e, 2.0, q, lam, std::exp(x), std::exp(a))).epsilon(1e-12));
}

TEST_CASE("expfun_laplace") {
    auto e = CharacteristicExponent::brownian_drift(-0.5);
    CHECK(expfun_laplace(e, 2.0, 0.0) == 1.0);
    // closed form for this family: E[e^{-q Sigma_inf}] = e^{-sqrt(2q)}
    for (double q : {0.5, 1.0, 2.0}) {
        CHECK(expfun_laplace(e, 2.0, q) == doctest::Approx(std::exp(-std::sqrt(2.0 * q))).epsilon(1e-9));
    }
    // pochhammer via the corrected Mittag-Leffler composite (argument x^rho = q)
    double rho = 1.5;
    auto po = CharacteristicExponent::pochhammer(rho, 1.0, 0.0);
    double q = 1.0, x = std::pow(q, 1.0 / rho);
    double composite = gamma_fn(rho - 1.0) * (mittag_leffler(rho, rho - 1.0, rho * q) -
                                              std::pow(rho, 1.0 / rho) * x * mittag_leffler(rho, rho, rho * q));
    CHECK(expfun_laplace(po, rho, q) == doctest::Approx(composite).epsilon(1e-8));
    // regime violations
    CHECK_THROWS_AS((void)expfun_laplace(CharacteristicExponent::brownian_drift(0.2), 2.0, 1.0), RegimeError);
}

TEST_CASE("entrance_law_laplace") {
    auto e = CharacteristicExponent::brownian_drift(-0.5);
    // q = 0, dual: 1/|mean| = 2
    CHECK(entrance_law_laplace(e, 2.0, 0.0, 1.0, EntranceKind::dual) == doctest::Approx(2.0).epsilon(1e-12));
    // dual_theta at q=0: 1/(psi'(theta) C_theta), psi'(1) = 0.5, C = sqrt(2)
    CHECK(entrance_law_laplace(e, 2.0, 0.0, 1.0, EntranceKind::dual_theta) ==
          doctest::Approx(1.0 / (0.5 * std::sqrt(2.0))).epsilon(1e-10));
    // composition: N(q y^alpha)/|mean|
    double q = 0.7, y = 1.3;
    CHECK(entrance_law_laplace(e, 2.0, q, y, EntranceKind::dual) ==
          doctest::Approx(std::exp(-std::sqrt(2.0 * q * y * y)) / 0.5).epsilon(1e-9));
    // mean = -inf rejected for dual
    LevyTriplet heavy;
    heavy.b = -0.5;
    heavy.sigma = 1.0;
    heavy.pieces.push_back({NuPiece::Kind::power_law, 0.05, 1.9, 0.0, -1.0, {}});
    auto eh = CharacteristicExponent::custom(heavy);
    REQUIRE(std::isinf(eh.mean()));
    CHECK_THROWS_AS((void)entrance_law_laplace(eh, 2.0, 1.0, 1.0, EntranceKind::dual), RegimeError);
}

TEST_CASE("selfdecomp_laplace") {
    auto e = CharacteristicExponent::brownian_drift(0.0);
    CHECK(selfdecomp_laplace(e, 2.0, 0.0) == 1.0);
    CHECK(selfdecomp_laplace(e, 2.0, 1.0) ==
          doctest::Approx(1.0 / bessel_I(0, std::sqrt(2.0))).epsilon(1e-12));
    double prev = 1.0;
    for (double q : {0.25, 1.0, 4.0, 16.0}) {
        double v = selfdecomp_laplace(e, 2.0, q);
        CHECK(v < prev);
        CHECK(v > 0.0);
        prev = v;
    }
}

TEST_CASE("wolfe_levy_exponent") {
    auto e = CharacteristicExponent::brownian_drift(0.0);
    CHECK(wolfe_levy_exponent(e, 2.0, 0.0) == 0.0);
    // phi_L(q)/q -> a_1 = 1/psi(alpha) as q -> 0
    double a1 = 1.0 / e.psi(2.0);
    CHECK(wolfe_levy_exponent(e, 2.0, 1e-8) / 1e-8 == doctest::Approx(a1).epsilon(1e-6));
    // nonnegative, increasing
    double prev = 0.0;
    for (double q : {0.5, 1.0, 2.0, 8.0}) {
        double v = wolfe_levy_exponent(e, 2.0, q);
        CHECK(v >= prev);
        prev = v;
    }
    // finite-difference oracle of q d/dq log I(q)
    double q = 1.3, h = 1e-6;
    Eigenfunction I(e, 2.0);
    double fd = (std::log(I.eval(q + h).value) - std::log(I.eval(q - h).value)) / (2.0 * h);
    CHECK(wolfe_levy_exponent(e, 2.0, q) == doctest::Approx(q * fd).epsilon(1e-8));
}

TEST_CASE("id_laplace") {
    auto e = CharacteristicExponent::stable(1.0, 1.5);
    CHECK(id_laplace(e, 1.5, 0.0, IdKind::bare) == 1.0);
    CHECK(id_laplace(e, 1.5, 0.0, IdKind::combined) == 1.0);
    double q = 1.7;
    CHECK(id_laplace(e, 1.5, q, IdKind::combined) ==
          doctest::Approx(id_laplace(e, 1.5, q, IdKind::bare) * selfdecomp_laplace(e, 1.5, q)).epsilon(1e-13));
    double v = id_laplace(e, 1.5, q, IdKind::combined);
    CHECK(v > 0.0);
    CHECK(v < 1.0);
}

TEST_CASE("hartman_ratio") {
    auto e = CharacteristicExponent::brownian_drift(0.0);
    CHECK(hartman_ratio(e, 2.0, 0.0, 1.0, 3.0) == 1.0);
    // Bessel cross-check: with rho = phi(lambda), I_{2,psi_rho}(z) = Gamma(rho+1)(z/2)^{-rho/2} I_rho(sqrt(2z))
    double lam = 1.0, a = 1.0, A = 3.0;
    double rho = e.phi_inverse(lam);
    auto Irho = [&](double z) {
        return gamma_fn(rho + 1.0) * std::pow(0.5 * z, -0.5 * rho) * bessel_I(rho, std::sqrt(2.0 * z));
    };
    auto I0 = [&](double z) { return bessel_I(0, std::sqrt(2.0 * z)); };
    double expect = std::pow(a / A, rho) * Irho(a) * I0(A) / (Irho(A) * I0(a));
    CHECK(hartman_ratio(e, 2.0, lam, a, A) == doctest::Approx(expect).epsilon(1e-11));
    // mpmath spot value
    CHECK(hartman_ratio(e, 2.0, 1.0, 1.0, 3.0) == doctest::Approx(0.29458850137860867).epsilon(1e-12));
    // multiplicativity across intermediate levels
    double x = 0.6, mid = 1.4, top = 2.9;
    CHECK(hartman_ratio(e, 2.0, lam, x, mid) * hartman_ratio(e, 2.0, lam, mid, top) ==
          doctest::Approx(hartman_ratio(e, 2.0, lam, x, top)).epsilon(1e-12));
    // in (0,1], decreasing in lambda
    double prev = 1.0 + 1e-12;
    for (double l2 : {0.5, 1.0, 2.0, 4.0}) {
        double v = hartman_ratio(e, 2.0, l2, 1.0, 3.0);
        CHECK(v > 0.0);
        CHECK(v < prev);
        prev = v;
    }
    // mean < 0 rejected
    CHECK_THROWS_AS((void)hartman_ratio(CharacteristicExponent::brownian_drift(-0.5), 2.0, 1.0, 1.0, 2.0),
                    RegimeError);
    // functional form at lambda = 0 is 1; telescopes in x
    CHECK(hartman_ratio_functional(e, 2.0, 0.0, 1.0, 0.0, 1.0) == 1.0);
    double h1 = hartman_ratio_functional(e, 2.0, 1.0, 0.7, -0.5, 0.2);
    double h2 = hartman_ratio_functional(e, 2.0, 1.0, 0.7, 0.2, 1.0);
    double h3 = hartman_ratio_functional(e, 2.0, 1.0, 0.7, -0.5, 1.0);
    CHECK(h1 * h2 == doctest::Approx(h3).epsilon(1e-12));
}

TEST_CASE("all transforms sit in [0,1] with value 1 at zero argument") {
    auto po = CharacteristicExponent::pochhammer(1.5, 1.0, 0.0);
    double alpha = 1.5;
    CHECK(fpt_up_laplace(po, alpha, 0.0, 0.5, 2.0) == 1.0);
    CHECK(expfun_laplace(po, alpha, 0.0) == 1.0);
    CHECK(selfdecomp_laplace(po, alpha, 0.0) == 1.0);
    CHECK(id_laplace(po, alpha, 0.0, IdKind::combined) == 1.0);
    for (double q : {0.01, 0.5, 3.0, 20.0}) {
        for (double v : {fpt_up_laplace(po, alpha, q, 0.5, 2.0), expfun_laplace(po, alpha, q),
                         selfdecomp_laplace(po, alpha, q), id_laplace(po, alpha, q, IdKind::bare),
                         id_laplace(po, alpha, q, IdKind::combined)}) {
            CHECK(v > 0.0);
            CHECK(v <= 1.0);
        }
    }
}
