#ifndef SSM_LEVY_EXPONENT_HPP
#define SSM_LEVY_EXPONENT_HPP

#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ssm/special_cases.hpp"

namespace ssm {

// Thrown when an operation is requested outside its admissible parameter
// regime (negative mean without theta < alpha, etc.). The CLI maps this to
// exit code 2.
struct RegimeError : std::domain_error {
    using std::domain_error::domain_error;
};

enum class FamilyTag { brownian_drift, stable, pochhammer, custom };

// One closed-form piece of a custom jump measure on (0, inf).
struct NuPiece {
    enum class Kind { exponential, power_law, polynomial };
    Kind kind = Kind::exponential;
    double coef = 1.0;
    double param = 1.0;           // decay rate (exponential) or exponent p (power_law: coef * r^-p)
    double lo = 0.0;
    double hi = -1.0;             // hi < 0 means unbounded support
    std::vector<double> poly;     // polynomial coefficients, ascending powers

    double density(double r) const;
    bool unbounded() const { return hi < 0.0; }
};

struct LevyTriplet {
    double b = 0.0;       // drift of the r <= 1 compensated Levy-Khintchine form
    double sigma = 0.0;   // Gaussian coefficient (psi has sigma/2 u^2)
    std::vector<NuPiece> pieces;
    FamilyTag family_tag = FamilyTag::custom;
};

struct RegularVariation {
    double beta = 1.0;   // psi(u) ~ l * u^{1+beta}
    double l = 0.5;
    bool estimated = false;  // true when fitted from a log-log slope (custom nu)
};

// A function handle with two derivatives, as needed by the generator.
struct SmoothFn {
    std::function<double(double)> f;
    std::function<double(double)> df;
    std::function<double(double)> d2f;
};

inline constexpr double kTolRoot = 1e-12;
inline constexpr double kTolGenerator = 1e-8;

// Spectrally negative infinitely divisible exponent psi (E[e^{u xi_1}] = e^{psi(u)}),
// optionally Esscher-shifted. Immutable after construction.
class CharacteristicExponent {
  public:
    static CharacteristicExponent brownian_drift(double gamma);
    static CharacteristicExponent stable(double c, double rho);
    static CharacteristicExponent pochhammer(double rho, double beta_scale, double gamma);
    static CharacteristicExponent custom(LevyTriplet triplet);

    // psi_gamma(u) = psi(u + gamma) - psi(gamma); shifts compose additively.
    CharacteristicExponent esscher(double gamma) const;

    double psi(double u) const;
    double psi_prime(double u) const;
    double mean() const;                         // E[xi_1], may be -infinity
    std::optional<double> cramer_root() const;   // theta > 0, present iff mean < 0
    double phi_inverse(double lambda) const;     // rho in [max(theta,0), inf)

    RegularVariation regular_variation() const { return rv_; }
    FamilyTag family() const { return tag_; }
    double gamma_shift() const { return gamma_shift_; }

    // Effective triplet of the (possibly shifted) exponent.
    double sigma() const { return sigma_; }
    double levy_drift() const { return levy_drift_; }
    bool has_jumps() const { return has_jumps_; }
    double nu_density(double r) const;

    // admissible regime of the eigenfunction theory: mean >= 0, or theta < alpha
    bool admissible(double alpha) const;
    void require_admissible(double alpha) const;

    // L f(x) = x^-alpha (sigma/2 x^2 f'' + b x f' +
    //          int ((f(e^-r x) - f(x)) + x f'(x) r 1_{r<=1}) nu(dr))
    double apply_generator(const SmoothFn& fn, double x, double alpha,
                           double rel_tol = kTolGenerator) const;

    // Family parameters for reporting / reconstruction.
    std::string describe() const;

    // pochhammer family accessors (throw for other families)
    const PochhammerFamily& pochhammer_family() const;

  private:
    CharacteristicExponent() = default;

    FamilyTag tag_ = FamilyTag::custom;
    double gamma_shift_ = 0.0;  // cumulative Esscher shift applied to the original family

    // family parameters (effective, shift folded in where the family is closed under it)
    double brown_gamma_ = 0.0;                       // brownian: psi = u^2/2 + g u
    double stable_c_ = 1.0, stable_rho_ = 1.5, stable_gamma_ = 0.0;  // c((u+g)^rho - g^rho)
    std::shared_ptr<PochhammerFamily> poch_;
    std::shared_ptr<LevyTriplet> custom_;
    double custom_shift_ = 0.0;  // esscher shift applied on top of a custom triplet

    double sigma_ = 0.0;
    double levy_drift_ = 0.0;
    bool has_jumps_ = false;
    RegularVariation rv_;

    void finalize();           // validates, computes mean/theta/drift/rv eagerly
    double mean_ = 0.0;
    std::optional<double> theta_;
    double jump_mass_tail(double from) const;  // int_from^inf r nu(dr)
};

}  // namespace ssm

#endif
