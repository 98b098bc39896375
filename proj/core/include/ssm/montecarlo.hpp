#ifndef SSM_MONTECARLO_HPP
#define SSM_MONTECARLO_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "ssm/levy_exponent.hpp"

namespace ssm {

// Philox4x32-10 counter-based generator keyed by (seed, path index):
// bit-identical streams regardless of worker count.
class CounterRng {
  public:
    CounterRng(std::uint64_t seed, std::uint64_t path_index);

    std::uint64_t next_u64();
    double uniform01();     // strictly inside (0,1)
    double normal();        // Box-Muller, second value cached
    double exponential();   // rate 1

  private:
    std::uint32_t key_[2];
    std::uint32_t ctr_[4];
    std::uint32_t buf_[4];
    int buf_pos_ = 4;
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;

    void fill();
};

struct PathConfig {
    CharacteristicExponent exponent;
    double alpha = 2.0;
    double dt = 1e-3;
    double eps = 0.0;       // small-jump truncation; <= 0 picks a default
    double horizon = 2000;  // max Levy time per path
    std::uint64_t paths = 100000;
    std::uint64_t seed = 1;
};

struct MCEstimate {
    double estimate = 0.0;
    double se = 0.0;
    std::uint64_t paths = 0;
    std::uint64_t seed = 0;
    double resolution_fraction = 1.0;  // fraction of paths resolved before the horizon
    double bias_bound = 0.0;           // one-sided bound from unresolved paths / truncation
    double ess = -1.0;                 // effective sample size (importance weighting only)
    bool unreliable_weights = false;   // ESS fell below 5% of the path count
    std::string to_json() const;
};

// A materialized Lamperti path on the simulation grid (testing / inspection).
struct LampertiPath {
    std::vector<double> t;      // Levy time
    std::vector<double> xi;     // Levy path
    std::vector<double> sigma;  // Sigma_t = int_0^t e^{alpha xi_u} du (trapezoid)
    bool positive_jump_seen = false;  // must stay false: spectral negativity
    std::uint64_t jumps = 0;
    std::vector<double> jump_sizes;   // sizes r > 0 of the compound-Poisson events
};

// Reusable path generator: family tables (jump inverse-CDF, substitution
// variance) are built once at construction. brownian_drift: exact increments;
// stable: Chambers-Mallows-Stuck with skewness -1; pochhammer: compound
// Poisson above eps + drift compensation + Gaussian small-jump substitution.
class PathSimulator {
  public:
    explicit PathSimulator(const PathConfig& cfg);
    ~PathSimulator();
    PathSimulator(PathSimulator&&) noexcept;

    LampertiPath simulate(double x0, std::uint64_t path_index, double t_max) const;

  private:
    struct Impl;
    std::unique_ptr<const Impl> impl_;
};

// One-shot convenience wrapper around PathSimulator.
LampertiPath simulate_levy_path(const PathConfig& cfg, double x0, std::uint64_t path_index, double t_max);

// diagnostics of the discretization (reported alongside estimates)
struct SimulationBias {
    double eps_used = 0.0;
    double substituted_variance_fraction = 0.0;  // var(small-jump Gaussian) / psi''(0)
    double jump_rate = 0.0;                      // compound-Poisson intensity
};
SimulationBias simulation_bias(const PathConfig& cfg);

// E_x[e^{-q kappa_a}] by simulation (minimal process; for mean < 0 paths sunk
// far below the barrier count as kappa_a = inf).
MCEstimate estimate_fpt_laplace(const PathConfig& cfg, double q, double x, double a);

// E_x[e^{-q kappa_a - lambda A_{kappa_a}}; kappa_a < kappa_0]
MCEstimate estimate_fpt_joint_laplace(const PathConfig& cfg, double q, double lambda, double x, double a);

// Several (q, lambda) functionals estimated from one path ensemble.
struct FptPoint {
    double q = 0.0;
    double lambda = 0.0;
};
std::vector<MCEstimate> estimate_fpt_batch(const PathConfig& cfg, const std::vector<FptPoint>& points,
                                           double x, double a);

// Samples of the exponential functional int_0^inf e^{sign * alpha xi_u} du
// (sign=+1 needs mean < 0, sign=-1 needs mean > 0), with adaptive level
// stopping. Returns the samples for reuse.
struct SigmaSample {
    std::vector<double> values;
    double resolution_fraction = 1.0;
    double truncation_bias = 0.0;  // a-posteriori mean residual estimate
    std::uint64_t seed = 0;
};
SigmaSample sample_exponential_functional(const PathConfig& cfg, int sign, double tail_tol = 1e-6);

// E[e^{-q Sigma_inf}] at each q, from a sample.
MCEstimate sigma_laplace_estimate(const SigmaSample& s, double q);
// E[Sigma^p] (fractional moments, Rivero identity checks)
MCEstimate sigma_moment_estimate(const SigmaSample& s, double p);

// Esscher-weighted estimate of E^(gamma)_x[e^{-q Sigma_{tau_a}}] from base-measure
// paths, reweighting with e^{gamma(xi_T - x) - psi(gamma) T} at T = tau_a.
MCEstimate esscher_weighted_fpt(const PathConfig& cfg, double gamma, double q, double x, double a);

}  // namespace ssm

#endif
