#ifndef SSM_SPECIAL_CASES_HPP
#define SSM_SPECIAL_CASES_HPP

#include <functional>

namespace ssm {

// Modified Bessel function of the first kind, real index nu > -1, x >= 0.
// Power series up to the crossover, divergent asymptotic series beyond.
double bessel_I(double nu, double x);

// MacDonald function K_nu(x), x > 0. Built from the I_{-nu} - I_nu
// combination for non-integer nu; integer indices go through a small-offset
// limit with Richardson extrapolation (never NaN). Large x switches to the
// e^{-x} asymptotic series.
double macdonald_K(double nu, double x);

// Generalized Mittag-Leffler E_{rho,beta}(z) = sum z^n / Gamma(rho n + beta),
// real z >= 0.
double mittag_leffler(double rho, double beta, double z);

// Residual of the Mellin-Laplace identity
//   int_0^inf e^{-(lambda+1)x} x^{beta-1} E_{rho,beta}(x^rho) dx
//     - (lambda+1)^{rho-beta} / ((lambda+1)^rho - 1).
double mellin_laplace_residual(double rho, double beta, double lambda);

// The one-sided Levy family with exponent
//   psi(u) = ((beta u + gamma - 1)_rho - (gamma - 1)_rho) / rho,
// rho in (1,2), beta >= 0, gamma > 1 - rho.
struct PochhammerFamily {
    double rho;
    double beta_scale;
    double gamma;

    double b_gamma;   // beta (gamma)_rho (Psi(gamma-1+rho) - Psi(gamma-1)), pole-safe
    double gamma0;    // zero of g -> b_g (coincides with the zero of the mean)
    double mean;      // psi'(0)
    double levy_drift;  // b of the Levy-Khintchine form compensated on r <= 1

    double psi(double u) const;
    double psi_prime(double u) const;
    double nu_density(double r) const;  // jump measure density on (0, infinity)
};

PochhammerFamily pochhammer_triplet(double rho, double beta_scale, double gamma);

// b_gamma of the family, evaluated without the removable 0*inf points.
double pochhammer_b_gamma(double rho, double beta_scale, double gamma);

// Generalized factorial (alpha,gamma)_{rho,n} = prod_{k=1}^n ((k alpha + gamma)^rho - gamma^rho).
// log result plus the value (value may overflow for large n; log never does).
struct GeneralizedFactorial {
    double log_value;
    double value;
};
GeneralizedFactorial generalized_factorial(double alpha, double gamma, double rho, int n);

// Generalized exponential I_{alpha,gamma,rho}(c_rho x) = sum_n x^n / (alpha,gamma)_{rho,n}.
double generalized_exp(double alpha, double gamma, double rho, double x);

}  // namespace ssm

#endif
