#include "ssm/gammafun.hpp"

#include <math.h>

#include <cmath>
#include <stdexcept>

namespace ssm {

namespace {

bool is_nonpositive_integer(double x) {
    return x <= 0.0 && x == std::floor(x);
}

}  // namespace

SignedLogGamma log_gamma_signed(double x) {
    if (is_nonpositive_integer(x)) return {HUGE_VAL, 0};
    int sign = 1;
    double la = lgamma_r(x, &sign);
    return {la, sign};
}

double gamma_fn(double x) {
    if (is_nonpositive_integer(x)) throw std::domain_error("gamma_fn: pole at non-positive integer");
    return std::tgamma(x);
}

double digamma(double x) {
    if (is_nonpositive_integer(x)) throw std::domain_error("digamma: pole at non-positive integer");
    // Reflection for x < 0: Psi(1-x) - Psi(x) = pi cot(pi x)
    if (x < 0.0) {
        const double pi = 3.14159265358979323846;
        return digamma(1.0 - x) - pi / std::tan(pi * x);
    }
    // Recurrence up to the asymptotic region, then the standard B_{2n} series.
    double result = 0.0;
    while (x < 8.0) {
        result -= 1.0 / x;
        x += 1.0;
    }
    double inv = 1.0 / x, inv2 = inv * inv;
    // Psi(x) ~ ln x - 1/(2x) - sum B_{2n}/(2n x^{2n})
    double series = inv2 * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0 - inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0 - inv2 * 691.0 / 32760.0)))));
    return result + std::log(x) - 0.5 * inv - series;
}

double pochhammer_sym(double k, double rho) {
    if (is_nonpositive_integer(k)) {
        // 1/Gamma(k) = 0; the symbol vanishes unless Gamma(k+rho) also blows up.
        if (is_nonpositive_integer(k + rho)) throw std::domain_error("pochhammer_sym: 0 * inf at double pole");
        return 0.0;
    }
    SignedLogGamma num = log_gamma_signed(k + rho);
    SignedLogGamma den = log_gamma_signed(k);
    if (num.sign == 0) throw std::domain_error("pochhammer_sym: Gamma pole in numerator");
    return num.sign * den.sign * std::exp(num.log_abs - den.log_abs);
}

double log_pochhammer(double s, double rho) {
    if (!(s > 0.0)) throw std::domain_error("log_pochhammer: s must be > 0");
    if (s < 32.0) return std::lgamma(s + rho) - std::lgamma(s);
    // Stirling difference: each piece evaluated to relative accuracy
    //   (s - 1/2) log1p(rho/s) + rho log(s + rho) - rho + tail
    double head = (s - 0.5) * std::log1p(rho / s) + rho * std::log(s + rho) - rho;
    double sp = s + rho;
    // Bernoulli tail terms as closed-form differences (1/sp^m - 1/s^m)
    double t1 = -(1.0 / 12.0) * rho / (s * sp);
    double s3 = s * s * s, sp3 = sp * sp * sp;
    double t2 = (1.0 / 360.0) * rho * (3.0 * s * s + 3.0 * s * rho + rho * rho) / (s3 * sp3);
    double s5 = s3 * s * s, sp5 = sp3 * sp * sp;
    double num5 = rho * (5.0 * s * s3 + 10.0 * s3 * rho + 10.0 * s * s * rho * rho +
                         5.0 * s * rho * rho * rho + rho * rho * rho * rho);
    double t3 = -(1.0 / 1260.0) * num5 / (s5 * sp5);
    return head + t1 + t2 + t3;
}

double pochhammer_sym_derivative(double k, double rho) {
    // d/dk Gamma(k+rho)/Gamma(k) = Gamma(k+rho) [Psi(k+rho)/Gamma(k) - Psi(k)/Gamma(k)]
    // Psi(k)/Gamma(k) is entire; shift twice so the evaluation never hits a pole.
    // e(k) := Psi(k)/Gamma(k) = [k(k+1)Psi(k+2) - (2k+1)] / Gamma(k+2)
    double gkr = gamma_fn(k + rho);  // k+rho > 0 in every use here
    double e;
    if (k > 0.5) {
        e = digamma(k) / gamma_fn(k);
    } else {
        e = (k * (k + 1.0) * digamma(k + 2.0) - (2.0 * k + 1.0)) / gamma_fn(k + 2.0);
    }
    double inv_gamma_k;
    if (k > 0.5) {
        inv_gamma_k = 1.0 / gamma_fn(k);
    } else {
        inv_gamma_k = k * (k + 1.0) / gamma_fn(k + 2.0);
    }
    return gkr * (digamma(k + rho) * inv_gamma_k - e);
}

double zeta2_tail(double K) {
    // Euler-Maclaurin for sum_{k>K} k^-2
    double i = 1.0 / K;
    return i - 0.5 * i * i + i * i * i / 6.0 - i * i * i * i * i / 30.0;
}

double zeta3_tail(double K) {
    double i = 1.0 / K;
    double i2 = i * i;
    return 0.5 * i2 - 0.5 * i2 * i + 0.25 * i2 * i2 - i2 * i2 * i2 / 12.0;
}

}  // namespace ssm
