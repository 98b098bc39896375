#include "ssm/special_cases.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "ssm/gammafun.hpp"
#include "ssm/quadrature.hpp"

namespace ssm {

namespace {

constexpr double kPi = 3.14159265358979323846;

double bessel_I_series(double nu, double x) {
    // I_nu(x) = (x/2)^nu sum_{n>=0} (x^2/4)^n / (n! Gamma(nu+n+1))
    double q = 0.25 * x * x;
    double term = std::pow(0.5 * x, nu) / gamma_fn(nu + 1.0);
    double sum = term;
    for (int n = 1; n < 400; ++n) {
        term *= q / (n * (nu + n));
        sum += term;
        if (term < 1e-17 * sum) break;
    }
    return sum;
}

// Asymptotic series coefficients a_k(nu) = prod_{j=1..k} (4nu^2-(2j-1)^2) / (k! 8^k)
double bessel_I_asymptotic(double nu, double x) {
    double mu = 4.0 * nu * nu;
    double sum = 1.0, term = 1.0;
    double prev = std::fabs(term);
    for (int k = 1; k <= 40; ++k) {
        double f = (mu - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (8.0 * k * x);
        term *= -f;
        if (std::fabs(term) > prev) break;  // divergence onset
        prev = std::fabs(term);
        sum += term;
        if (std::fabs(term) < 1e-17 * std::fabs(sum)) break;
    }
    return std::exp(x) / std::sqrt(2.0 * kPi * x) * sum;
}

double macdonald_K_asymptotic(double nu, double x) {
    double mu = 4.0 * nu * nu;
    double sum = 1.0, term = 1.0;
    double prev = std::fabs(term);
    for (int k = 1; k <= 40; ++k) {
        double f = (mu - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (8.0 * k * x);
        term *= f;
        if (std::fabs(term) > prev) break;
        prev = std::fabs(term);
        sum += term;
        if (std::fabs(term) < 1e-17 * std::fabs(sum)) break;
    }
    return std::exp(-x) * std::sqrt(kPi / (2.0 * x)) * sum;
}

// K through the displayed combination; only valid for non-integer nu.
double macdonald_K_difference(double nu, double x) {
    double g1 = gamma_fn(1.0 - nu), g2 = gamma_fn(nu);
    return 0.5 * g1 * g2 * (bessel_I(-nu, x) - bessel_I(nu, x));
}

}  // namespace

double bessel_I(double nu, double x) {
    if (nu <= -1.0) throw std::domain_error("bessel_I: index must be > -1");
    if (x < 0.0) throw std::domain_error("bessel_I: argument must be >= 0");
    if (x == 0.0) {
        if (nu == 0.0) return 1.0;
        if (nu > 0.0) return 0.0;
        return std::numeric_limits<double>::infinity();
    }
    const double crossover = 30.0;
    if (x <= crossover) return bessel_I_series(nu, x);
    return bessel_I_asymptotic(nu, x);
}

namespace {

// non-integer index of any size: reduce into (0,1) and recur upward with
// K_{j+1} = K_{j-1} + (2 j / x) K_j (K is even in the index, so the second
// seed K_{mu-1} equals K_{1-mu}).
double macdonald_K_noninteger(double nu, double x) {
    double mu = nu - std::floor(nu);
    int m = int(std::floor(nu));
    double k_mu = macdonald_K_difference(mu, x);
    if (m == 0) return k_mu;
    double k_lo = macdonald_K_difference(1.0 - mu, x);  // K_{mu-1}
    double order = mu;
    for (int j = 0; j < m; ++j) {
        double k_hi = k_lo + (2.0 * order / x) * k_mu;
        k_lo = k_mu;
        k_mu = k_hi;
        order += 1.0;
    }
    return k_mu;
}

}  // namespace

double macdonald_K(double nu, double x) {
    if (x <= 0.0) throw std::domain_error("macdonald_K: argument must be > 0");
    nu = std::fabs(nu);  // K is even in the index
    if (x >= 9.0) return macdonald_K_asymptotic(nu, x);
    double dist = std::fabs(nu - std::round(nu));
    if (dist > 1e-7) return macdonald_K_noninteger(nu, x);
    // integer index: the difference formula degenerates; average the two
    // offsets (kills the odd term) and Richardson in eps^2.
    double n0 = std::round(nu);
    auto k_sym = [&](double e) {
        return 0.5 * (macdonald_K_noninteger(n0 + e, x) + macdonald_K_noninteger(std::fabs(n0 - e), x));
    };
    const double eps = 2e-3;
    double k1 = k_sym(eps), k2 = k_sym(0.5 * eps);
    return (4.0 * k2 - k1) / 3.0;
}

double mittag_leffler(double rho, double beta, double z) {
    if (rho <= 0.0 || beta <= 0.0) throw std::domain_error("mittag_leffler: need rho, beta > 0");
    if (z < 0.0) throw std::domain_error("mittag_leffler: real evaluation needs z >= 0");
    if (z == 0.0) return 1.0 / gamma_fn(beta);
    // log-space terms with running max-term normalization; all terms positive.
    double logz = std::log(z);
    double lt = -log_gamma_signed(beta).log_abs;  // log t_0
    double lt_max = lt;
    double scaled = 1.0;  // sum exp(lt_n - lt_max)
    for (int n = 1; n < 200000; ++n) {
        lt = n * logz - log_gamma_signed(rho * n + beta).log_abs;
        if (lt > lt_max) {
            scaled = scaled * std::exp(lt_max - lt) + 1.0;
            lt_max = lt;
        } else {
            scaled += std::exp(lt - lt_max);
            if (lt < lt_max - 40.0 && std::lgamma(rho * (n + 1) + beta) > (n + 1) * logz) break;
        }
    }
    double lv = lt_max + std::log(scaled);
    if (lv > 709.0) return std::numeric_limits<double>::infinity();
    return std::exp(lv);
}

double mellin_laplace_residual(double rho, double beta, double lambda) {
    if (lambda < 0.0 || beta < 0.0) throw std::domain_error("mellin_laplace_residual: need lambda, beta >= 0");
    double L = lambda + 1.0;
    auto integrand = [&](double x) {
        return std::exp(-L * x) * std::pow(x, beta - 1.0) * mittag_leffler(rho, beta, std::pow(x, rho));
    };
    // [0,1] directly (x^{beta-1} endpoint singularity is fine for tanh-sinh);
    // [1,inf) via x = 1 - ln(t)/lambda_eff: integrand decays like e^{-lambda x} poly.
    double head = integrate_tanh_sinh(integrand, 0.0, 1.0, 1e-12).value;
    double lam_eff = std::max(lambda, 0.5);
    auto mapped = [&](double t) {
        double x = 1.0 - std::log(t) / lam_eff;
        return integrand(x) / (lam_eff * t);
    };
    double tail = integrate_tanh_sinh(mapped, 0.0, 1.0, 1e-12).value;
    double rhs = std::pow(L, rho - beta) / (std::pow(L, rho) - 1.0);
    return head + tail - rhs;
}

double pochhammer_b_gamma(double rho, double beta_scale, double gamma) {
    // b_g = beta (g)_rho [Psi(g-1+rho) - Psi(g-1)]
    // (g)_rho Psi(g-1): both factors blow up / vanish near g = 0; rewrite with
    // Psi(g-1) = Psi(g+1) - 1/(g-1) - 1/g and 1/Gamma(g) = g/Gamma(g+1).
    double s = gamma - 1.0;
    double gk = gamma_fn(gamma + rho);  // gamma + rho > 1 - rho + rho = 1... actually > 0 for gamma > 1-rho, rho>1
    double first = gk * digamma(s + rho);  // finite: s + rho > 0
    double inv_gamma_g, psi_part;
    // (g)_rho Psi(g-1) = Gamma(g+rho) * [Psi(g+1) - 1/(g-1)] * g/Gamma(g+1) - Gamma(g+rho)/Gamma(g+1)
    double gg1 = gamma_fn(gamma + 1.0);
    psi_part = gk * ((digamma(gamma + 1.0) - 1.0 / (gamma - 1.0)) * gamma / gg1 - 1.0 / gg1);
    inv_gamma_g = gamma / gg1;
    return beta_scale * (first * inv_gamma_g - psi_part);
}

double PochhammerFamily::psi(double u) const {
    double s = beta_scale * u + gamma - 1.0;
    return (pochhammer_sym(s, rho) - pochhammer_sym(gamma - 1.0, rho)) / rho;
}

double PochhammerFamily::psi_prime(double u) const {
    double s = beta_scale * u + gamma - 1.0;
    return beta_scale / rho * pochhammer_sym_derivative(s, rho);
}

double PochhammerFamily::nu_density(double r) const {
    // jump density on (0,inf); the normalization (rho-1)/(beta Gamma(2-rho))
    // is fixed by matching psi'' = int r^2 e^{-ur} nu(dr) against the closed form.
    if (r <= 0.0) return 0.0;
    double c = (rho - 1.0) / (beta_scale * gamma_fn(2.0 - rho));
    double em = -std::expm1(-r / beta_scale);  // 1 - e^{-r/beta}
    return c * std::exp(-(rho + gamma - 1.0) * r / beta_scale) / std::pow(em, rho + 1.0);
}

PochhammerFamily pochhammer_triplet(double rho, double beta_scale, double gamma) {
    if (!(rho > 1.0 && rho < 2.0)) throw std::domain_error("pochhammer_triplet: rho must be in (1,2)");
    if (beta_scale < 0.0) throw std::domain_error("pochhammer_triplet: beta_scale must be >= 0");
    if (gamma <= 1.0 - rho) throw std::domain_error("pochhammer_triplet: gamma must exceed 1 - rho");

    PochhammerFamily fam;
    fam.rho = rho;
    fam.beta_scale = beta_scale;
    fam.gamma = gamma;
    fam.b_gamma = pochhammer_b_gamma(rho, beta_scale, gamma);
    fam.mean = fam.psi_prime(0.0);

    // gamma0: zero of b_gamma on (1-rho, 1); shared with the zero of the mean.
    {
        double lo = 1.0 - rho + 1e-8, hi = 1.0 - 1e-8;
        double flo = pochhammer_b_gamma(rho, beta_scale, lo);
        double fhi = pochhammer_b_gamma(rho, beta_scale, hi);
        if (flo * fhi > 0.0) throw std::runtime_error("pochhammer_triplet: b_gamma not bracketed on (1-rho, 1)");
        for (int it = 0; it < 200; ++it) {
            double mid = 0.5 * (lo + hi);
            double fm = pochhammer_b_gamma(rho, beta_scale, mid);
            if (flo * fm <= 0.0) { hi = mid; fhi = fm; } else { lo = mid; flo = fm; }
            if (hi - lo < 1e-14 * std::max(1.0, std::fabs(mid))) break;
        }
        fam.gamma0 = 0.5 * (lo + hi);
    }

    // Levy-Khintchine drift under the r <= 1 compensation: b = psi'(0) + int_1^inf r nu(dr)
    double tail = integrate_to_infinity([&](double r) { return r * fam.nu_density(r); }, 1.0, 1e-11).value;
    fam.levy_drift = fam.mean + tail;
    return fam;
}

GeneralizedFactorial generalized_factorial(double alpha, double gamma, double rho, int n) {
    if (n < 0) throw std::domain_error("generalized_factorial: n >= 0");
    double lg = 0.0;
    bool zero = false;
    for (int k = 1; k <= n; ++k) {
        double f = std::pow(k * alpha + gamma, rho) - std::pow(gamma, rho);
        if (f == 0.0) { zero = true; break; }
        lg += std::log(f);
    }
    if (zero) return {-std::numeric_limits<double>::infinity(), 0.0};
    double v = lg < 709.0 ? std::exp(lg) : std::numeric_limits<double>::infinity();
    return {lg, v};
}

double generalized_exp(double alpha, double gamma, double rho, double x) {
    if (x < 0.0) throw std::domain_error("generalized_exp: x >= 0");
    if (x == 0.0) return 1.0;
    double logx = std::log(x);
    double lt = 0.0;       // log of current term
    double lt_max = 0.0;
    double scaled = 1.0;   // sum of exp(lt - lt_max) so far
    for (int n = 1; n < 200000; ++n) {
        double f = std::pow(n * alpha + gamma, rho) - std::pow(gamma, rho);
        if (f <= 0.0) throw std::domain_error("generalized_exp: non-positive factor");
        lt += logx - std::log(f);
        if (lt > lt_max) {
            scaled = scaled * std::exp(lt_max - lt) + 1.0;
            lt_max = lt;
        } else {
            scaled += std::exp(lt - lt_max);
        }
        if (lt < lt_max - 40.0 && f > x) break;
    }
    double lv = lt_max + std::log(scaled);
    if (lv > 709.0) return std::numeric_limits<double>::infinity();
    return std::exp(lv);
}

}  // namespace ssm
