#ifndef SSM_QUADRATURE_HPP
#define SSM_QUADRATURE_HPP

#include <functional>
#include <stdexcept>
#include <string>

namespace ssm {

struct QuadratureError : std::runtime_error {
    double lo, hi;
    QuadratureError(const std::string& what, double lo_, double hi_)
        : std::runtime_error(what + " on [" + std::to_string(lo_) + ", " + std::to_string(hi_) + "]"),
          lo(lo_), hi(hi_) {}
};

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int levels = 0;
    bool converged = false;
};

// tanh-sinh quadrature on a finite interval. Tolerates integrable endpoint
// singularities (r^{-p}, p < 1, log blow-ups). Throws QuadratureError when the
// level budget is exhausted without convergence.
QuadResult integrate_tanh_sinh(const std::function<double(double)>& f, double a, double b,
                               double rel_tol = 1e-10, double abs_tol = 1e-300, int max_level = 12);

// integral over [a, inf): substitutes r = a/t, t in (0,1].
QuadResult integrate_to_infinity(const std::function<double(double)>& f, double a,
                                 double rel_tol = 1e-10, double abs_tol = 1e-300);

}  // namespace ssm

#endif
