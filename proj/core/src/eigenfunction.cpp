#include "ssm/eigenfunction.hpp"

#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>

#include "ssm/gammafun.hpp"

namespace ssm {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

Eigenfunction::Eigenfunction(const CharacteristicExponent& exponent, double alpha)
    : exp_(exponent), alpha_(alpha) {
    if (!(alpha > 0.0)) throw std::domain_error("Eigenfunction: alpha must be > 0");
    log_coeffs_.reserve(256);
    log_coeffs_.push_back(0.0);  // a_0 = 1
}

void Eigenfunction::ensure(size_t n) const {
    {
        std::shared_lock lk(mu_);
        if (log_coeffs_.size() > n) return;
    }
    std::unique_lock lk(mu_);
    while (log_coeffs_.size() <= n) {
        size_t k = log_coeffs_.size();
        double pk = exp_.psi(alpha_ * double(k));
        if (!(pk > 0.0))
            throw RegimeError("eigenfunction coefficients: psi_gamma(alpha k) <= 0 at k=" + std::to_string(k) +
                              " (theta >= alpha)");
        log_coeffs_.push_back(log_coeffs_.back() - std::log(pk));
    }
}

double Eigenfunction::log_coefficient(int n) const {
    if (n < 0) throw std::domain_error("log_coefficient: n >= 0");
    ensure(size_t(n));
    std::shared_lock lk(mu_);
    return log_coeffs_[size_t(n)];
}

std::vector<double> Eigenfunction::coefficients(int n_max) const {
    ensure(size_t(n_max));
    std::shared_lock lk(mu_);
    std::vector<double> out(size_t(n_max) + 1);
    for (int n = 0; n <= n_max; ++n) out[size_t(n)] = std::exp(log_coeffs_[size_t(n)]);
    return out;
}

// weight_power in {0,1,2}: term weights 1, n, n(n-1); shift = weight_power
// (derivatives shift the power of z down).
SeriesValue Eigenfunction::eval_weighted(double z, double tol, int weight_power, int shift) const {
    if (z < 0.0) throw std::domain_error("eigenfunction eval: z must be >= 0");
    SeriesValue out;
    if (z == 0.0) {
        // only the n = shift term survives
        double a = std::exp(log_coefficient(shift));
        double w = (weight_power == 0) ? 1.0 : (weight_power == 1 ? shift : shift * (shift - 1));
        out.value = w * a;
        out.log_value = std::log(out.value);
        return out;
    }
    double logz = std::log(z);
    double lt_max = -kInf;
    double scaled = 0.0;
    int low_count = 0;
    const int n_start = (weight_power == 2) ? 2 : (weight_power == 1 ? 1 : 0);
    size_t block = 64;
    ensure(block);
    for (int n = n_start; n < 2000000; ++n) {
        if (size_t(n) >= block) {
            block *= 2;
            ensure(block);
        }
        double lw = 0.0;
        if (weight_power == 1) lw = std::log(double(n));
        else if (weight_power == 2) lw = std::log(double(n)) + std::log(double(n - 1));
        double lt;
        {
            std::shared_lock lk(mu_);
            lt = lw + log_coeffs_[size_t(n)] + (n - shift) * logz;
        }
        if (lt > lt_max) {
            scaled = scaled * std::exp(lt_max - lt) + 1.0;
            lt_max = lt;
            low_count = 0;
        } else {
            double t = std::exp(lt - lt_max);
            scaled += t;
            // cutoff: 3 consecutive terms below tol * partial sum
            if (t < tol * scaled) {
                if (++low_count >= 3) break;
            } else {
                low_count = 0;
            }
        }
    }
    out.log_value = lt_max + std::log(scaled);
    if (out.log_value > 709.0) {
        out.value = kInf;
        out.finite_value = false;
    } else {
        out.value = std::exp(out.log_value);
    }
    return out;
}

SeriesValue Eigenfunction::eval(double z, double tol) const { return eval_weighted(z, tol, 0, 0); }
SeriesValue Eigenfunction::eval_derivative(double z, double tol) const { return eval_weighted(z, tol, 1, 1); }
SeriesValue Eigenfunction::eval_second_derivative(double z, double tol) const {
    return eval_weighted(z, tol, 2, 2);
}

dd Eigenfunction::eval_dd(dd z) const {
    if (z.hi < 0.0) throw std::domain_error("eval_dd: z must be >= 0");
    dd sum{1.0, 0.0};
    dd a{1.0, 0.0};
    dd zp{1.0, 0.0};
    for (int n = 1; n < 100000; ++n) {
        double pk = exp_.psi(alpha_ * double(n));
        if (!(pk > 0.0)) throw RegimeError("eval_dd: psi_gamma(alpha k) <= 0");
        a = a / pk;
        zp = zp * z;
        dd term = a * zp;
        sum = sum + term;
        if (term.hi < 1e-34 * sum.hi && pk > z.hi) break;
    }
    return sum;
}

namespace {

// log(psi(alpha k + theta) / psi(alpha k)) - (1+beta) (theta/alpha) / k, the
// k-th regularized log-factor of the C_theta product. Families get
// cancellation-free forms; the direct lgamma route loses ~s ln s * eps per
// term which would swamp the 1/k^2 tail.
struct ProductTermEvaluator {
    const CharacteristicExponent& e;
    double alpha, theta, s;  // s = (1+beta) theta/alpha

    double operator()(double k) const {
        double ak = alpha * k;
        switch (e.family()) {
            case FamilyTag::brownian_drift: {
                // psi(u) = u(u + 2g)/2: ratio = (1 + theta/(alpha k))(1 + theta/(alpha k + 2g))
                double g = e.mean();
                return std::log1p(theta / ak) + std::log1p(theta / (ak + 2.0 * g)) - s / k;
            }
            case FamilyTag::stable: {
                // psi_g(u) = c((u+g)^rho - g^rho); in the mean<0 regime g = 0 never
                // holds, but keep the general form
                RegularVariation rv = e.regular_variation();
                double rho = rv.beta + 1.0;
                double g = e.gamma_shift();
                double r = rho * std::log1p(theta / (ak + g));
                if (g > 0.0) {
                    double grho = std::pow(g, rho);
                    r += std::log1p(-grho / std::pow(ak + theta + g, rho)) -
                         std::log1p(-grho / std::pow(ak + g, rho));
                }
                return r - s / k;
            }
            case FamilyTag::pochhammer: {
                // psi(u) = ((b u + gamma - 1)_rho - C0)/rho with C0 = (gamma-1)_rho
                const PochhammerFamily& fam = e.pochhammer_family();
                double rho = fam.rho;
                double s1 = fam.beta_scale * ak + fam.gamma - 1.0;
                double s2 = fam.beta_scale * (ak + theta) + fam.gamma - 1.0;
                double lp1 = log_pochhammer(s1, rho), lp2 = log_pochhammer(s2, rho);
                double c0 = pochhammer_sym(fam.gamma - 1.0, rho);
                double r = lp2 - lp1;
                if (c0 != 0.0) r += std::log1p(-c0 * std::exp(-lp2)) - std::log1p(-c0 * std::exp(-lp1));
                return r - s / k;
            }
            case FamilyTag::custom:
                return std::log(e.psi(ak + theta)) - std::log(e.psi(ak)) - s / k;
        }
        return 0.0;
    }
};

}  // namespace

AsymptoticProfile c_theta(const CharacteristicExponent& exponent, double alpha, CThetaMode mode, double tol) {
    if (!(exponent.mean() < 0.0)) throw RegimeError("c_theta: requires mean < 0");
    auto th = exponent.cramer_root();
    if (!th || !(*th < alpha)) throw RegimeError("c_theta: requires 0 < theta < alpha");
    double theta = *th;

    AsymptoticProfile prof;
    prof.theta = theta;
    prof.theta_alpha = theta / alpha;
    RegularVariation rv = exponent.regular_variation();
    prof.beta = rv.beta;
    prof.l_beta = rv.l;
    prof.method = mode;

    if (mode == CThetaMode::product && rv.estimated) {
        // the explicit product constant needs genuine regular-variation data
        mode = CThetaMode::ratio_estimate;
        prof.method = CThetaMode::ratio_estimate;
    }

    if (mode == CThetaMode::product) {
        double s = (1.0 + rv.beta) * prof.theta_alpha;
        ProductTermEvaluator term{exponent, alpha, theta, s};
        // Kahan sum of d_k up to K, then a (c2, c3) tail fit from window averages.
        const size_t K = 1 << 16;
        double sum = 0.0, c = 0.0;
        for (size_t k = 1; k <= K; ++k) {
            double y = term(double(k)) - c;
            double t = sum + y;
            c = (t - sum) - y;
            sum = t;
        }
        // window-averaged k^2 d_k at K/2 and K to estimate c2 + c3/k
        auto window_avg = [&](size_t kc) {
            double acc = 0.0;
            const int w = 128;
            for (int j = -w; j < w; ++j) {
                double k = double(kc + size_t(j));
                acc += k * k * term(k);
            }
            return acc / (2.0 * w);
        };
        double k1 = double(K / 2), k2 = double(K);
        double A1 = window_avg(K / 2), A2 = window_avg(K);
        double c3 = (A1 - A2) / (1.0 / k1 - 1.0 / k2);
        double c2 = A2 - c3 / k2;
        double tail = c2 * zeta2_tail(double(K)) + c3 * zeta3_tail(double(K));
        double logC = -prof.theta_alpha * std::log(rv.l) - s * std::log(alpha) + s * kEulerMascheroni + sum + tail;
        prof.c_theta = std::exp(logC);
        return prof;
    }

    // ratio estimate: R(x) = I(x^alpha) / (x^theta I_theta(x^alpha)) on a geometric ladder
    CharacteristicExponent shifted = exponent.esscher(theta);
    Eigenfunction I(exponent, alpha), Itheta(shifted, alpha);
    double prev = 0.0, cur = 0.0;
    double x = 8.0;
    for (int j = 0; j < 12; ++j) {
        double z = std::pow(x, alpha);
        double logR = I.eval(z).log_value - theta * std::log(x) - Itheta.eval(z).log_value;
        cur = std::exp(logR);
        if (j > 0 && std::fabs(cur - prev) <= std::max(tol, 1e-14) * std::fabs(cur)) {
            prof.c_theta = cur;
            return prof;
        }
        prev = cur;
        x *= 2.0;
    }
    prof.c_theta = cur;
    return prof;
}

NValue eval_N(const AsymptoticProfile& profile, const CharacteristicExponent& exponent, double alpha,
              double x, double tol) {
    if (x < 0.0) throw std::domain_error("eval_N: x must be >= 0");
    NValue out;
    if (x == 0.0) {
        out.value = 1.0;
        return out;
    }
    CharacteristicExponent shifted = exponent.esscher(profile.theta);
    Eigenfunction I(exponent, alpha), Itheta(shifted, alpha);
    double i_val = I.eval(x, tol).value;
    double sub = profile.c_theta * std::pow(x, profile.theta_alpha) * Itheta.eval(x, tol).value;
    double n_dbl = i_val - sub;
    out.condition = n_dbl > 0.0 ? i_val / n_dbl : kInf;
    out.value = n_dbl;
    if (out.condition > 1e8 || !(n_dbl > 0.0)) {
        out.cancellation_flag = true;
        out.extended_precision = true;
        dd A = I.eval_dd(x);
        dd B = Itheta.eval_dd(x);
        dd C{profile.c_theta, profile.c_theta_lo};
        dd xp = dd_pow(dd(x), dd(profile.theta_alpha));
        dd N = A - C * xp * B;
        out.value = N.to_double();
        out.condition = out.value > 0.0 ? A.to_double() / out.value : kInf;
    }
    return out;
}

NValue eval_N(const CharacteristicExponent& exponent, double alpha, double x, double tol) {
    AsymptoticProfile prof = c_theta(exponent, alpha, CThetaMode::product, tol);
    return eval_N(prof, exponent, alpha, x, tol);
}

}  // namespace ssm
