#include "ssm/transforms.hpp"

#include <cmath>
#include <stdexcept>

namespace ssm {

namespace {

void require_admissible(const CharacteristicExponent& e, double alpha) { e.require_admissible(alpha); }

}  // namespace

double fpt_up_laplace(const CharacteristicExponent& e, double alpha, double q, double x, double a) {
    if (q < 0.0) throw std::domain_error("fpt_up_laplace: q >= 0");
    if (!(0.0 <= x && x <= a)) throw std::domain_error("fpt_up_laplace: need 0 <= x <= a");
    require_admissible(e, alpha);
    if (q == 0.0 || x == a) return 1.0;
    Eigenfunction I(e, alpha);
    double num = I.eval(q * std::pow(x, alpha)).log_value;
    double den = I.eval(q * std::pow(a, alpha)).log_value;
    return std::exp(num - den);
}

double fpt_joint_laplace(const CharacteristicExponent& e, double alpha, double q, double lambda, double x,
                         double a) {
    if (q < 0.0 || lambda < 0.0) throw std::domain_error("fpt_joint_laplace: q, lambda >= 0");
    if (!(0.0 <= x && x <= a)) throw std::domain_error("fpt_joint_laplace: need 0 <= x <= a");
    require_admissible(e, alpha);
    double rho = e.phi_inverse(lambda);
    CharacteristicExponent shifted = e.esscher(rho);
    double power = rho == 0.0 ? 1.0 : std::pow(x / a, rho);
    if (x == 0.0 && rho > 0.0) return 0.0;
    if (q == 0.0) return power;
    Eigenfunction I(shifted, alpha);
    double num = I.eval(q * std::pow(x, alpha)).log_value;
    double den = I.eval(q * std::pow(a, alpha)).log_value;
    return power * std::exp(num - den);
}

double levy_fpt_functional_laplace(const CharacteristicExponent& e, double alpha, double q, double lambda,
                                   double x, double a) {
    if (q < 0.0 || lambda < 0.0) throw std::domain_error("levy_fpt_functional_laplace: q, lambda >= 0");
    if (!(x <= a)) throw std::domain_error("levy_fpt_functional_laplace: need x <= a");
    require_admissible(e, alpha);
    double rho = e.phi_inverse(lambda);
    double pref = std::exp(rho * (x - a));
    if (q == 0.0) return pref;
    CharacteristicExponent shifted = e.esscher(rho);
    Eigenfunction I(shifted, alpha);
    double num = I.eval(q * std::exp(alpha * x)).log_value;
    double den = I.eval(q * std::exp(alpha * a)).log_value;
    return pref * std::exp(num - den);
}

double expfun_laplace(const CharacteristicExponent& e, double alpha, double q) {
    if (q < 0.0) throw std::domain_error("expfun_laplace: q >= 0");
    if (q == 0.0) return 1.0;
    return eval_N(e, alpha, q).value;
}

double entrance_law_laplace(const CharacteristicExponent& e, double alpha, double q, double y,
                            EntranceKind which) {
    if (q < 0.0 || y <= 0.0) throw std::domain_error("entrance_law_laplace: q >= 0, y > 0");
    double m = e.mean();
    if (!(m < 0.0)) throw RegimeError("entrance_law_laplace: requires mean < 0");
    double n = eval_N(e, alpha, q * std::pow(y, alpha)).value;
    if (which == EntranceKind::dual) {
        if (std::isinf(m)) throw RegimeError("entrance_law_laplace: dual form requires a finite mean");
        return n / std::fabs(m);
    }
    auto profile = c_theta(e, alpha, CThetaMode::product);
    double dpsi = e.psi_prime(profile.theta);
    return n / (dpsi * profile.c_theta);
}

double selfdecomp_laplace(const CharacteristicExponent& e, double alpha, double q) {
    if (q < 0.0) throw std::domain_error("selfdecomp_laplace: q >= 0");
    require_admissible(e, alpha);
    if (q == 0.0) return 1.0;
    Eigenfunction I(e, alpha);
    return std::exp(-I.eval(q).log_value);
}

double wolfe_levy_exponent(const CharacteristicExponent& e, double alpha, double q) {
    if (q < 0.0) throw std::domain_error("wolfe_levy_exponent: q >= 0");
    require_admissible(e, alpha);
    if (q == 0.0) return 0.0;
    Eigenfunction I(e, alpha);
    double logd = I.eval_derivative(q).log_value;
    double logi = I.eval(q).log_value;
    return q * std::exp(logd - logi);
}

double id_laplace(const CharacteristicExponent& e, double alpha, double q, IdKind which) {
    if (q < 0.0) throw std::domain_error("id_laplace: q >= 0");
    if (q == 0.0) return 1.0;
    double bare = std::exp(-wolfe_levy_exponent(e, alpha, q));
    if (which == IdKind::bare) return bare;
    return bare * selfdecomp_laplace(e, alpha, q);
}

double hartman_ratio(const CharacteristicExponent& e, double alpha, double lambda, double a, double A) {
    if (lambda < 0.0) throw std::domain_error("hartman_ratio: lambda >= 0");
    if (!(0.0 < a && a < A)) throw std::domain_error("hartman_ratio: need 0 < a < A");
    if (e.mean() < 0.0) throw RegimeError("hartman_ratio: requires mean >= 0");
    if (lambda == 0.0) return 1.0;
    double rho = e.phi_inverse(lambda);
    CharacteristicExponent shifted = e.esscher(rho);
    Eigenfunction I(e, alpha), Irho(shifted, alpha);
    double lg = rho * (std::log(a) - std::log(A)) + Irho.eval(a).log_value + I.eval(A).log_value -
                Irho.eval(A).log_value - I.eval(a).log_value;
    return std::exp(lg);
}

double hartman_ratio_functional(const CharacteristicExponent& e, double alpha, double lambda, double q,
                                double x, double a) {
    if (lambda < 0.0 || q < 0.0) throw std::domain_error("hartman_ratio_functional: lambda, q >= 0");
    if (!(x <= a)) throw std::domain_error("hartman_ratio_functional: need x <= a");
    if (e.mean() < 0.0) throw RegimeError("hartman_ratio_functional: requires mean >= 0");
    if (lambda == 0.0) return 1.0;
    double rho = e.phi_inverse(lambda);
    CharacteristicExponent shifted = e.esscher(rho);
    Eigenfunction I(e, alpha), Irho(shifted, alpha);
    double zx = q * std::exp(alpha * x), za = q * std::exp(alpha * a);
    double lg = rho * (x - a) + Irho.eval(zx).log_value + I.eval(za).log_value - Irho.eval(za).log_value -
                I.eval(zx).log_value;
    return std::exp(lg);
}

}  // namespace ssm
