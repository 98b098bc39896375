#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "ssm/gammafun.hpp"
#include "ssm/special_cases.hpp"

using namespace ssm;

// Reference values: mpmath at 40 digits.

TEST_CASE("bessel_I reference values") {
    CHECK(bessel_I(0, 0.0) == 1.0);
    CHECK(bessel_I(0.7, 0.0) == 0.0);
    CHECK(bessel_I(0, 2.0) == doctest::Approx(2.2795853023360673).epsilon(1e-14));
    CHECK(bessel_I(0.3, 1.0) == doctest::Approx(1.0887949490168029).epsilon(1e-13));
    CHECK(bessel_I(-0.5, 2.2) == doctest::Approx(2.4572316511838932).epsilon(1e-13));
    CHECK(bessel_I(2.5, 7.0) == doctest::Approx(104.61336757234871).epsilon(1e-13));
    CHECK(bessel_I(1.0, 4.0) == doctest::Approx(9.7594651537044499).epsilon(1e-13));
    CHECK(bessel_I(0.5, 10.0) == doctest::Approx(2778.784603874571).epsilon(1e-13));
    CHECK(bessel_I(-0.7, 3.3) == doctest::Approx(5.6990867155388671).epsilon(1e-13));
    // asymptotic branch
    CHECK(bessel_I(0, 30.0) == doctest::Approx(781672297823.97749).epsilon(1e-12));
    // closed form I_{1/2} = sqrt(2/(pi x)) sinh x
    for (double x : {0.5, 3.0, 12.0, 35.0}) {
        CHECK(bessel_I(0.5, x) ==
              doctest::Approx(std::sqrt(2.0 / (M_PI * x)) * std::sinh(x)).epsilon(1e-12));
    }
    // stdlib cross-check on non-negative orders (third route)
    for (double nu : {0.0, 0.3, 1.0, 2.5}) {
        for (double x : {0.7, 4.2, 19.0}) {
            CHECK(bessel_I(nu, x) == doctest::Approx(std::cyl_bessel_i(nu, x)).epsilon(1e-11));
        }
    }
}

TEST_CASE("macdonald_K reference values and identity") {
    CHECK(macdonald_K(0.3, 1.0) == doctest::Approx(0.43507602420880202).epsilon(1e-12));
    CHECK(macdonald_K(0.5, 1.0) == doctest::Approx(0.46106850444789456).epsilon(1e-12));
    CHECK(macdonald_K(0.7, 2.0) == doctest::Approx(0.12601327130661064).epsilon(1e-12));
    // K is even in the index
    CHECK(macdonald_K(-0.5, 4.47213595499958) ==
          doctest::Approx(0.0067698410511658277).epsilon(1e-11));
    // displayed identity 2K = Gamma(1-g)Gamma(g)(I_{-g} - I_g)
    double g = 0.3, x = 1.0;
    double rhs = 0.5 * gamma_fn(1.0 - g) * gamma_fn(g) * (bessel_I(-g, x) - bessel_I(g, x));
    CHECK(macdonald_K(g, x) == doctest::Approx(rhs).epsilon(1e-10));
    // integer index goes through the limit path, never NaN
    CHECK(std::isfinite(macdonald_K(0.0, 1.0)));
    CHECK(macdonald_K(0.0, 1.0) == doctest::Approx(0.42102443824070833).epsilon(1e-8));
    CHECK(macdonald_K(1.0, 1.0) == doctest::Approx(0.60190723019723457).epsilon(1e-8));
    CHECK(macdonald_K(0.0, 0.5) == doctest::Approx(0.92441907122766586).epsilon(1e-8));
    // closed form K_{1/2}(x) = sqrt(pi/(2x)) e^{-x}, both branches
    for (double x : {0.4, 2.0, 8.0, 12.0, 20.0}) {
        CHECK(macdonald_K(0.5, x) ==
              doctest::Approx(std::sqrt(M_PI / (2.0 * x)) * std::exp(-x)).epsilon(2e-8));
    }
}

TEST_CASE("mittag_leffler values and reductions") {
    CHECK(mittag_leffler(1.5, 1.5, 0.0) == doctest::Approx(1.1283791670955126).epsilon(1e-14));
    CHECK(mittag_leffler(1.0, 1.0, 1.0) == doctest::Approx(std::exp(1.0)).epsilon(1e-14));
    CHECK(mittag_leffler(1.5, 1.5, 1.0) == doctest::Approx(1.7232443570326095).epsilon(1e-13));
    CHECK(mittag_leffler(1.5, 0.5, 2.0) == doctest::Approx(4.1636279886572214).epsilon(1e-13));
    CHECK(mittag_leffler(1.8, 1.8, 3.0) == doctest::Approx(2.1103942181917736).epsilon(1e-13));
    CHECK(mittag_leffler(1.3, 0.3, 2.5) == doctest::Approx(9.5566696765608787).epsilon(1e-13));
    // E_{2,1}(z) = cosh(sqrt z)
    CHECK(mittag_leffler(2.0, 1.0, 9.0) == doctest::Approx(std::cosh(3.0)).epsilon(1e-13));
    // large-argument asymptotic validity: E_{rho,beta}(x^rho) ~ e^x x^{1-beta} / rho
    double rho = 1.5, beta = 1.5, x = 40.0;
    double lhs = mittag_leffler(rho, beta, std::pow(x, rho));
    double asym = std::exp(x) * std::pow(x, 1.0 - beta) / rho;
    CHECK(lhs / asym == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("mellin-laplace identity residuals") {
    CHECK(std::fabs(mellin_laplace_residual(1.5, 1.5, 1.0)) < 1e-8);
    CHECK(std::fabs(mellin_laplace_residual(1.5, 0.5, 2.0)) < 1e-8);
    // beta = rho: RHS simplifies to 1/((lambda+1)^rho - 1)
    double L = 2.0, rho = 1.5;
    CHECK(std::pow(L, rho - rho) / (std::pow(L, rho) - 1.0) ==
          doctest::Approx(1.0 / (std::pow(L, rho) - 1.0)));
    CHECK(std::fabs(mellin_laplace_residual(1.5, 1.5, 1.0)) < 1e-8);
    CHECK(std::fabs(mellin_laplace_residual(1.3, 1.3, 1.0)) < 1e-8);
    CHECK(std::fabs(mellin_laplace_residual(1.8, 0.9, 1.5)) < 1e-8);
}

TEST_CASE("pochhammer family triplet") {
    auto fam = pochhammer_triplet(1.5, 1.0, 0.0);
    CHECK(fam.psi(2.0) == doctest::Approx(0.8862269254527580).epsilon(1e-13));
    CHECK(fam.psi(1.0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(fam.mean == doctest::Approx(-1.1816359006036774).epsilon(1e-12));
    CHECK(fam.psi_prime(1.0) == doctest::Approx(0.59081795030183868).epsilon(1e-12));
    // gamma0 is the shared zero of b_gamma and the mean
    CHECK(fam.gamma0 == doctest::Approx(0.41753806148377671).epsilon(1e-9));
    CHECK(std::fabs(pochhammer_b_gamma(1.5, 1.0, fam.gamma0)) < 1e-9);
    // sign property: mean >= 0 iff gamma >= gamma0
    CHECK(pochhammer_triplet(1.5, 1.0, fam.gamma0 + 0.05).mean > 0.0);
    CHECK(pochhammer_triplet(1.5, 1.0, fam.gamma0 - 0.05).mean < 0.0);
    // b_gamma is continuous through its removable point gamma = 0
    double b_eps = pochhammer_b_gamma(1.5, 1.0, 1e-9);
    CHECK(pochhammer_b_gamma(1.5, 1.0, 0.0) == doctest::Approx(b_eps).epsilon(1e-6));
    CHECK(pochhammer_b_gamma(1.5, 1.0, 0.0) == doctest::Approx(gamma_fn(1.5)).epsilon(1e-12));
    // Levy drift reproduced (mpmath: mean + int_1^inf r nu)
    CHECK(fam.levy_drift == doctest::Approx(0.10943738592480509).epsilon(1e-9));
    // gamma <= 1 - rho rejected
    CHECK_THROWS(pochhammer_triplet(1.5, 1.0, -0.5));
}

TEST_CASE("generalized factorial identities") {
    // (2,3)_{1,4} = 2^4 4! = 384
    CHECK(generalized_factorial(2.0, 3.0, 1.0, 4).value == doctest::Approx(384.0).epsilon(1e-14));
    CHECK(generalized_factorial(1.7, 0.4, 1.5, 0).value == 1.0);
    // (alpha,gamma)_{0,n} = 0 for n >= 1
    CHECK(generalized_factorial(2.0, 3.0, 0.0, 3).value == 0.0);

    // randomized draws for the remaining identities
    std::uint64_t s = 88172645463325252ull;
    auto rnd = [&]() {  // xorshift in (0,1)
        s ^= s << 13; s ^= s >> 7; s ^= s << 17;
        return double(s >> 11) * 0x1.0p-53;
    };
    for (int it = 0; it < 100; ++it) {
        double alpha = 0.5 + 2.0 * rnd();
        double gamma = 2.0 * rnd();
        double rho = 1.0 + 0.999 * rnd();
        int n = 1 + int(rnd() * 12);
        // (alpha,gamma)_{1,n} = alpha^n n!
        double fact = 1.0;
        for (int k = 1; k <= n; ++k) fact *= k * alpha;
        CHECK(generalized_factorial(alpha, gamma, 1.0, n).value == doctest::Approx(fact).epsilon(1e-12));
        // (alpha,0)_{rho,n} = alpha^n n! (alpha,0)_{rho-1,n}
        double lhs = generalized_factorial(alpha, 0.0, rho, n).log_value;
        double rhs = std::log(fact) + generalized_factorial(alpha, 0.0, rho - 1.0, n).log_value;
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
        // (alpha,gamma)_{rho,n} = alpha^{rho n} (1, gamma/alpha)_{rho,n}
        double lhs2 = generalized_factorial(alpha, gamma, rho, n).log_value;
        double rhs2 = rho * n * std::log(alpha) + generalized_factorial(1.0, gamma / alpha, rho, n).log_value;
        CHECK(lhs2 == doctest::Approx(rhs2).epsilon(1e-12));
    }
}

TEST_CASE("generalized exponential") {
    CHECK(generalized_exp(2.0, 0.4, 1.5, 0.0) == 1.0);
    // rho -> 1 limit: I_{alpha,gamma,rho}(c_rho x) -> e^{x/alpha}; monotone ladder
    double target = std::exp(0.5);
    double prev_err = 1.0;
    for (double rho : {1.2, 1.1, 1.05, 1.01, 1.001}) {
        double err = std::fabs(generalized_exp(2.0, 0.4, rho, 1.0) - target);
        CHECK(err < prev_err);
        prev_err = err;
    }
    CHECK(prev_err < 1e-2);
    // mpmath spot value (rho=1.001, alpha=2, gamma=0.4, x=1)
    CHECK(generalized_exp(2.0, 0.4, 1.001, 1.0) == doctest::Approx(1.6476106566355788).epsilon(1e-12));
    CHECK(generalized_exp(1.5, 0.0, 1.5, 1.0) == doctest::Approx(1.6608459731068177).epsilon(1e-12));
}
