#ifndef SSM_GAMMAFUN_HPP
#define SSM_GAMMAFUN_HPP

namespace ssm {

// log|Gamma(x)| together with the sign of Gamma(x).
struct SignedLogGamma {
    double log_abs;
    int sign;  // -1, 0 (pole), +1
};

SignedLogGamma log_gamma_signed(double x);

// Gamma(x) for any non-pole x (negative arguments via reflection).
double gamma_fn(double x);

// digamma Psi(x) = Gamma'(x)/Gamma(x); poles at 0, -1, -2, ...
double digamma(double x);

// Pochhammer symbol (k)_rho = Gamma(k+rho)/Gamma(k), continued through the
// poles of Gamma(k) where it vanishes (1/Gamma is entire).
double pochhammer_sym(double k, double rho);

// log (s)_rho for s > 0, cancellation-free for large s (direct lgamma
// differences lose ~s ln s * eps absolute).
double log_pochhammer(double s, double rho);

// d/dk (k)_rho, pole-safe for k > -2 (covers every family parameterization).
double pochhammer_sym_derivative(double k, double rho);

// Euler-Mascheroni constant.
inline constexpr double kEulerMascheroni = 0.57721566490153286060651209008240;

// sum_{k>K} 1/k^2 and 1/k^3 (Euler-Maclaurin, ~1e-16 for K >= 16).
double zeta2_tail(double K);
double zeta3_tail(double K);

}  // namespace ssm

#endif
