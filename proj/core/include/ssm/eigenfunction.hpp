#ifndef SSM_EIGENFUNCTION_HPP
#define SSM_EIGENFUNCTION_HPP

#include <shared_mutex>
#include <vector>

#include "ssm/double_double.hpp"
#include "ssm/levy_exponent.hpp"

namespace ssm {

// Value of an entire-series evaluation. For arguments where the plain value
// would overflow, `value` is +inf and `log_value` carries the result.
struct SeriesValue {
    double value = 0.0;
    double log_value = 0.0;
    bool finite_value = true;
};

inline constexpr double kSeriesTol = 1e-16;

// I_{alpha,psi_gamma}(z) = sum a_n z^n with a_n = prod_{k<=n} psi_gamma(alpha k)^{-1}.
// Coefficients are cached in log space; the committed prefix is readable
// concurrently, growth takes the exclusive lock.
class Eigenfunction {
  public:
    Eigenfunction(const CharacteristicExponent& exponent, double alpha);

    Eigenfunction(const Eigenfunction&) = delete;
    Eigenfunction& operator=(const Eigenfunction&) = delete;

    const CharacteristicExponent& exponent() const { return exp_; }
    double alpha() const { return alpha_; }

    // log a_n; grows the cache as needed. Throws RegimeError if some
    // psi_gamma(alpha k) <= 0 (theta >= alpha).
    double log_coefficient(int n) const;

    // a_0 .. a_n_max as plain doubles (they underflow eventually; use
    // log_coefficient for large n).
    std::vector<double> coefficients(int n_max) const;

    SeriesValue eval(double z, double tol = kSeriesTol) const;             // sum a_n z^n
    SeriesValue eval_derivative(double z, double tol = kSeriesTol) const;  // sum n a_n z^{n-1}
    SeriesValue eval_second_derivative(double z, double tol = kSeriesTol) const;

    // double-double evaluation (used by the eval_N cancellation path and the
    // extended-precision Laplace inversion hooks)
    dd eval_dd(dd z) const;
    dd eval_dd(double z) const { return eval_dd(dd(z)); }

  private:
    CharacteristicExponent exp_;
    double alpha_;
    mutable std::vector<double> log_coeffs_;
    mutable std::shared_mutex mu_;

    void ensure(size_t n) const;
    SeriesValue eval_weighted(double z, double tol, int weight_power, int shift) const;
};

enum class CThetaMode { product, ratio_estimate };

// (theta, theta/alpha, regular-variation data, C_theta) governing the
// large-argument behavior I(x^alpha) ~ C_theta x^theta I_theta(x^alpha).
struct AsymptoticProfile {
    double theta = 0.0;
    double theta_alpha = 0.0;
    double beta = 1.0;
    double l_beta = 0.5;
    double c_theta = 0.0;
    double c_theta_lo = 0.0;  // optional double-double refinement of c_theta
    CThetaMode method = CThetaMode::product;
};

// Requires mean < 0 and 0 < theta < alpha. Product mode uses the convergent
// regularized product; ratio mode extrapolates I(x^alpha)/(x^theta I_theta(x^alpha))
// on a geometric ladder.
AsymptoticProfile c_theta(const CharacteristicExponent& exponent, double alpha, CThetaMode mode,
                          double tol = 1e-12);

struct NValue {
    double value = 0.0;
    double condition = 1.0;        // I(x) / N(x), the cancellation severity
    bool extended_precision = false;
    bool cancellation_flag = false;
};

// N_{alpha,psi,theta}(x) = I_{alpha,psi}(x) - C_theta x^{theta/alpha} I_{alpha,psi_theta}(x).
// Switches to double-double accumulation when the condition estimate exceeds 1e8.
NValue eval_N(const CharacteristicExponent& exponent, double alpha, double x, double tol = 1e-12);
NValue eval_N(const AsymptoticProfile& profile, const CharacteristicExponent& exponent, double alpha,
              double x, double tol = 1e-12);

}  // namespace ssm

#endif
