#ifndef SSM_DIVISIBILITY_HPP
#define SSM_DIVISIBILITY_HPP

#include <functional>
#include <string>
#include <vector>

#include "ssm/double_double.hpp"
#include "ssm/levy_exponent.hpp"

namespace ssm {

inline constexpr double kTolCM = 1e-9;   // absolute, on normalized margins
inline constexpr double kTolInv = 1e-3;  // relative, density nonnegativity / mass

enum class Verdict { pass, fail, inconclusive };

std::string verdict_name(Verdict v);

std::vector<double> log_grid(double lo, double hi, int n);

struct OrderMargin {
    int order;
    double min_margin;   // min over the grid of the normalized signed difference
    double at_point;     // grid point where the minimum is attained
    bool noise_limited;  // margins at this order are below the estimated noise floor
};

struct DivisibilityReport {
    std::string target;
    std::vector<double> grid;
    int order_max = 6;
    std::vector<OrderMargin> margins;
    Verdict verdict = Verdict::inconclusive;
    std::vector<std::string> warnings;

    std::string to_json() const;
};

// Checks (-1)^n Delta_h^n f(u) >= -tol_cm for n = 1..order_max on the grid,
// with h proportional to u and margins normalized by sum_j C(n,j)|f(u+jh)|.
// Margins below the differencing noise floor yield "inconclusive", not "fail".
DivisibilityReport complete_monotonicity_check(const std::function<double(double)>& f,
                                               const std::vector<double>& grid, int order_max,
                                               double f_rel_accuracy = 1e-13,
                                               const std::string& target = "f");

// Self-decomposability residual check: q -> I(c q)/I(q) completely monotone
// for each c in (0,1).
DivisibilityReport selfdecomp_check(const CharacteristicExponent& e, double alpha,
                                    const std::vector<double>& c_values, const std::vector<double>& grid,
                                    int order_max);

// A Laplace transform with an optional extended-precision evaluator. The dd
// evaluator must accept a double-double argument: Gaver-Stehfest amplifies
// argument rounding by the coefficient magnitude.
struct LaplaceTransformFn {
    std::function<double(double)> eval;
    std::function<dd(dd)> eval_dd;  // optional; enables more Gaver-Stehfest terms
};

struct InversionGrid {
    std::vector<double> t;
    std::vector<double> density;
    std::vector<double> error_estimate;
    std::string method = "gaver-stehfest";
    bool stable = true;

    std::string to_json() const;
};

// Real-axis Gaver-Stehfest inversion. terms must be even; accuracy is limited
// by the alternating-coefficient blowup (4^m), hence the dd evaluator hook.
InversionGrid laplace_invert(const LaplaceTransformFn& f, const std::vector<double>& t_grid,
                             int terms = 14);

struct UnimodalityResult {
    Verdict verdict = Verdict::inconclusive;
    double mode = 0.0;
};

// Sign-sequence test on the inverted density: at most one rise->fall change
// after suppressing differences within error bars.
UnimodalityResult unimodality_check(const InversionGrid& grid);

}  // namespace ssm

#endif
