#ifndef SSM_TRANSFORMS_HPP
#define SSM_TRANSFORMS_HPP

#include "ssm/eigenfunction.hpp"
#include "ssm/levy_exponent.hpp"

namespace ssm {

// E_x[e^{-q kappa_a}] = I(q x^alpha) / I(q a^alpha), 0 <= x <= a.
double fpt_up_laplace(const CharacteristicExponent& e, double alpha, double q, double x, double a);

// E_x[e^{-q kappa_a - lambda A_{kappa_a}}; kappa_a < kappa_0]
//   = (x/a)^rho I_rho(q x^alpha) / I_rho(q a^alpha), rho = phi(lambda).
double fpt_joint_laplace(const CharacteristicExponent& e, double alpha, double q, double lambda, double x,
                         double a);

// E_x[e^{-lambda tau_a - q Sigma_{tau_a}}; tau_a < inf]
//   = e^{rho(x-a)} I_rho(q e^{alpha x}) / I_rho(q e^{alpha a})   (log-scale levels x <= a)
double levy_fpt_functional_laplace(const CharacteristicExponent& e, double alpha, double q, double lambda,
                                   double x, double a);

// E[e^{-q Sigma_inf}] = N_{alpha,psi,theta}(q); mean < 0, 0 < theta < alpha.
double expfun_laplace(const CharacteristicExponent& e, double alpha, double q);

enum class EntranceKind { dual, dual_theta };

// Laplace transforms of the dual entrance laws:
//   dual:       N(q y^alpha) / |E[xi_1]|           (-inf < mean < 0)
//   dual_theta: N(q y^alpha) / (psi'(theta) C_theta)
double entrance_law_laplace(const CharacteristicExponent& e, double alpha, double q, double y,
                            EntranceKind which);

// 1 / I(q): Laplace transform of a positive self-decomposable law.
double selfdecomp_laplace(const CharacteristicExponent& e, double alpha, double q);

// phi_L(q) = q I'(q)/I(q), the Laplace exponent of the Wolfe subordinator.
double wolfe_levy_exponent(const CharacteristicExponent& e, double alpha, double q);

enum class IdKind { bare, combined };

// exp(-phi_L(q)) and exp(-phi_L(q))/I(q): infinitely divisible Laplace transforms.
double id_laplace(const CharacteristicExponent& e, double alpha, double q, IdKind which);

// (a/A)^rho I_rho(a) I(A) / (I_rho(A) I(a)), rho = phi(lambda); requires mean >= 0.
double hartman_ratio(const CharacteristicExponent& e, double alpha, double lambda, double a, double A);

// e^{rho(x-a)} I_rho(q e^{alpha x}) I(q e^{alpha a}) / (I_rho(q e^{alpha a}) I(q e^{alpha x})):
// the h-transformed first-passage form of the same law (x <= a, log-scale levels).
double hartman_ratio_functional(const CharacteristicExponent& e, double alpha, double lambda, double q,
                                double x, double a);

}  // namespace ssm

#endif
