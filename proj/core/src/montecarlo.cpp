#include "ssm/montecarlo.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <thread>

#include "ssm/quadrature.hpp"
#include "json.hpp"

namespace ssm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = 3.14159265358979323846;

}  // namespace

// ---------------------------------------------------------------------------
// Philox4x32-10
// ---------------------------------------------------------------------------

namespace {

inline void philox_round(std::uint32_t ctr[4], const std::uint32_t key[2]) {
    const std::uint64_t m0 = 0xD2511F53ull, m1 = 0xCD9E8D57ull;
    std::uint64_t p0 = m0 * ctr[0];
    std::uint64_t p1 = m1 * ctr[2];
    std::uint32_t hi0 = std::uint32_t(p0 >> 32), lo0 = std::uint32_t(p0);
    std::uint32_t hi1 = std::uint32_t(p1 >> 32), lo1 = std::uint32_t(p1);
    std::uint32_t out[4];
    out[0] = hi1 ^ ctr[1] ^ key[0];
    out[1] = lo1;
    out[2] = hi0 ^ ctr[3] ^ key[1];
    out[3] = lo0;
    ctr[0] = out[0]; ctr[1] = out[1]; ctr[2] = out[2]; ctr[3] = out[3];
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t path_index) {
    key_[0] = std::uint32_t(seed);
    key_[1] = std::uint32_t(seed >> 32);
    ctr_[0] = 0;
    ctr_[1] = 0;
    ctr_[2] = std::uint32_t(path_index);
    ctr_[3] = std::uint32_t(path_index >> 32);
}

void CounterRng::fill() {
    std::uint32_t c[4] = {ctr_[0], ctr_[1], ctr_[2], ctr_[3]};
    std::uint32_t k[2] = {key_[0], key_[1]};
    for (int r = 0; r < 10; ++r) {
        philox_round(c, k);
        k[0] += 0x9E3779B9u;
        k[1] += 0xBB67AE85u;
    }
    buf_[0] = c[0]; buf_[1] = c[1]; buf_[2] = c[2]; buf_[3] = c[3];
    // bump the 64-bit draw counter (ctr_[0], ctr_[1])
    if (++ctr_[0] == 0) ++ctr_[1];
    buf_pos_ = 0;
}

std::uint64_t CounterRng::next_u64() {
    if (buf_pos_ > 2) fill();
    std::uint64_t v = (std::uint64_t(buf_[buf_pos_ + 1]) << 32) | buf_[buf_pos_];
    buf_pos_ += 2;
    return v;
}

double CounterRng::uniform01() {
    return (double(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::normal() {
    if (has_cached_normal_) {
        has_cached_normal_ = false;
        return cached_normal_;
    }
    double u1 = uniform01(), u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * kPi * u2;
    cached_normal_ = r * std::sin(a);
    has_cached_normal_ = true;
    return r * std::cos(a);
}

double CounterRng::exponential() { return -std::log(uniform01()); }

// ---------------------------------------------------------------------------
// family steppers
// ---------------------------------------------------------------------------

namespace {

struct StepperModel {
    FamilyTag tag;
    double alpha;
    double dt;

    // continuous part
    double drift = 0.0;      // per unit time
    double gauss_sigma = 0.0;  // diffusion scale (brownian: 1; pochhammer: substitution sigma)

    // stable part
    double stable_rho = 0.0;
    double cms_theta0 = 0.0;
    double cms_prefactor = 0.0;  // (1 + tan^2)^{1/(2 rho)}
    double cms_dt_scale = 0.0;   // (c dt |cos(pi rho/2)|)^{1/rho} for dt=1; scaled by delta^{1/rho}
    // pure-jump crossings have no bridge correction; refine the step near the
    // barrier so the one-sided localization bias stays under the MC noise
    double near_zone = 0.0;      // distance below the barrier that triggers refinement
    double dt_near = 0.0;

    // compound-Poisson part (jumps subtracted from xi)
    double jump_rate = 0.0;
    std::vector<double> jump_r;    // abscissae
    std::vector<double> jump_cdf;  // normalized CDF at abscissae

    double eps_used = 0.0;
    double substituted_fraction = 0.0;

    bool has_stable() const { return stable_rho > 0.0; }
    bool has_jumps() const { return jump_rate > 0.0; }

    double sample_jump(CounterRng& rng) const {
        double u = rng.uniform01();
        // binary search on the CDF, linear interpolation between knots
        size_t lo = 0, hi = jump_cdf.size() - 1;
        while (hi - lo > 1) {
            size_t mid = (lo + hi) / 2;
            (jump_cdf[mid] < u ? lo : hi) = mid;
        }
        double c0 = jump_cdf[lo], c1 = jump_cdf[hi];
        double w = c1 > c0 ? (u - c0) / (c1 - c0) : 0.5;
        double r = jump_r[lo] + w * (jump_r[hi] - jump_r[lo]);
        if (!(r > 0.0)) throw std::runtime_error("sample_jump: non-positive jump size");
        return r;
    }

    // continuous increment over delta (everything except compound-Poisson jumps)
    double continuous_increment(CounterRng& rng, double delta) const {
        double inc = drift * delta;
        if (gauss_sigma > 0.0) inc += gauss_sigma * std::sqrt(delta) * rng.normal();
        if (has_stable()) {
            double u = kPi * (rng.uniform01() - 0.5);
            double w = rng.exponential();
            double x = cms_prefactor * std::sin(stable_rho * (u + cms_theta0)) /
                       std::pow(std::cos(u), 1.0 / stable_rho) *
                       std::pow(std::cos(u - stable_rho * (u + cms_theta0)) / w, (1.0 - stable_rho) / stable_rho);
            inc += cms_dt_scale * std::pow(delta, 1.0 / stable_rho) * x;
        }
        return inc;
    }
};

StepperModel build_stepper(const CharacteristicExponent& e, double alpha, double dt, double eps) {
    StepperModel m;
    m.tag = e.family();
    m.alpha = alpha;
    m.dt = dt;
    switch (e.family()) {
        case FamilyTag::brownian_drift:
            m.drift = e.mean();
            m.gauss_sigma = 1.0;
            m.dt_near = dt / 64.0;
            m.near_zone = 4.0 * m.gauss_sigma * std::sqrt(dt);
            return m;
        case FamilyTag::stable: {
            if (e.gamma_shift() != 0.0)
                throw std::invalid_argument("simulation: Esscher-shifted stable is not directly simulable; "
                                            "use esscher-weighted estimation");
            RegularVariation rv = e.regular_variation();
            double rho = rv.beta + 1.0;
            double c = rv.l;
            m.stable_rho = rho;
            double t = std::tan(kPi * rho / 2.0);
            m.cms_theta0 = std::atan(-t) / rho;  // skewness -1
            m.cms_prefactor = std::pow(1.0 + t * t, 1.0 / (2.0 * rho));
            m.cms_dt_scale = std::pow(c * std::fabs(std::cos(kPi * rho / 2.0)), 1.0 / rho);
            m.dt_near = dt / 256.0;
            m.near_zone = 4.0 * m.cms_dt_scale * std::pow(dt, 1.0 / rho);
            return m;
        }
        case FamilyTag::pochhammer:
        case FamilyTag::custom: {
            if (e.family() == FamilyTag::custom)
                throw std::invalid_argument("simulation: custom nu needs a sampler; family not simulable");
            if (eps <= 0.0) eps = 0.02;
            m.eps_used = eps;
            // sigma_eps^2 = int_0^eps r^2 nu(dr), Lambda = int_eps^inf nu
            double s2 = integrate_tanh_sinh([&](double r) { return r * r * e.nu_density(r); }, 0.0, eps, 1e-10).value;
            double psi2_0 = integrate_tanh_sinh([&](double r) { return r * r * e.nu_density(r); }, 0.0, 1.0, 1e-10).value +
                            integrate_to_infinity([&](double r) { return r * r * e.nu_density(r); }, 1.0, 1e-10).value;
            m.gauss_sigma = std::sqrt(s2);
            m.substituted_fraction = s2 / psi2_0;
            double head = integrate_tanh_sinh([&](double r) { return e.nu_density(r); }, eps, 1.0, 1e-10).value;
            double tail = integrate_to_infinity([&](double r) { return e.nu_density(r); }, 1.0, 1e-10).value;
            m.jump_rate = head + tail;
            // drift: b + int_{(eps,1]} r nu(dr)
            double comp = integrate_tanh_sinh([&](double r) { return r * e.nu_density(r); }, eps, 1.0, 1e-10).value;
            m.drift = e.levy_drift() + comp;
            if (m.gauss_sigma > 0.0) {
                m.dt_near = dt / 64.0;
                m.near_zone = 4.0 * m.gauss_sigma * std::sqrt(dt);
            }
            // inverse-CDF table on log-spaced knots; R_max where the tail is ~1e-12 of Lambda
            double rmax = 1.0;
            while (integrate_to_infinity([&](double r) { return e.nu_density(r); }, rmax, 1e-9).value >
                   1e-12 * m.jump_rate)
                rmax *= 2.0;
            const int knots = 1024;
            m.jump_r.resize(knots);
            m.jump_cdf.resize(knots);
            double llo = std::log(eps), lhi = std::log(rmax);
            double acc = 0.0;
            m.jump_r[0] = eps;
            m.jump_cdf[0] = 0.0;
            for (int i = 1; i < knots; ++i) {
                double r0 = std::exp(llo + (lhi - llo) * (i - 1) / double(knots - 1));
                double r1 = std::exp(llo + (lhi - llo) * i / double(knots - 1));
                acc += integrate_tanh_sinh([&](double r) { return e.nu_density(r); }, r0, r1, 1e-9, 1e-16, 10).value;
                m.jump_r[size_t(i)] = r1;
                m.jump_cdf[size_t(i)] = acc;
            }
            for (auto& cdfv : m.jump_cdf) cdfv /= acc;
            return m;
        }
    }
    throw std::invalid_argument("simulation: unsupported family");
}

// thread-pool over fixed-size chunks; reduction happens in chunk order, so
// results are byte-identical for any worker count.
struct ChunkAccumulator {
    double sum = 0.0, sumsq = 0.0;
    double wsum = 0.0, wsumsq = 0.0, wvsum = 0.0;
    double bias = 0.0;
    std::uint64_t resolved = 0, n = 0;
};

int worker_count() {
    if (const char* env = std::getenv("SSM_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : int(hw);
}

template <typename PerPath>
std::vector<ChunkAccumulator> run_chunks(std::uint64_t paths, PerPath&& per_path) {
    const std::uint64_t chunk = 1024;
    const std::uint64_t n_chunks = (paths + chunk - 1) / chunk;
    std::vector<ChunkAccumulator> acc(n_chunks);
    std::atomic<std::uint64_t> next{0};
    int nw = std::min<std::uint64_t>(worker_count(), n_chunks);
    auto work = [&]() {
        for (;;) {
            std::uint64_t c = next.fetch_add(1);
            if (c >= n_chunks) return;
            std::uint64_t lo = c * chunk, hi = std::min(paths, lo + chunk);
            ChunkAccumulator& a = acc[c];
            for (std::uint64_t i = lo; i < hi; ++i) per_path(i, a);
            a.n = hi - lo;
        }
    };
    if (nw <= 1) {
        work();
    } else {
        std::vector<std::thread> ts;
        for (int w = 0; w < nw; ++w) ts.emplace_back(work);
        for (auto& t : ts) t.join();
    }
    return acc;
}

MCEstimate reduce_plain(const std::vector<ChunkAccumulator>& acc, std::uint64_t paths, std::uint64_t seed) {
    double sum = 0.0, sumsq = 0.0, bias = 0.0;
    std::uint64_t resolved = 0;
    for (const auto& a : acc) {
        sum += a.sum;
        sumsq += a.sumsq;
        bias += a.bias;
        resolved += a.resolved;
    }
    MCEstimate est;
    est.paths = paths;
    est.seed = seed;
    double n = double(paths);
    est.estimate = sum / n;
    double var = std::max(0.0, sumsq / n - est.estimate * est.estimate);
    est.se = std::sqrt(var / n);
    est.resolution_fraction = double(resolved) / n;
    est.bias_bound = bias / n;
    return est;
}

}  // namespace

SimulationBias simulation_bias(const PathConfig& cfg) {
    StepperModel m = build_stepper(cfg.exponent, cfg.alpha, cfg.dt, cfg.eps);
    return {m.eps_used, m.substituted_fraction, m.jump_rate};
}

// ---------------------------------------------------------------------------
// path walking
// ---------------------------------------------------------------------------

namespace {

struct WalkState {
    double t = 0.0;
    double xi = 0.0;
    double sigma = 0.0;
    double exi = 1.0;  // cached e^{alpha xi}
};

// advance to the next event (grid point or jump), integrating Sigma by
// trapezoid; jumps change xi only, never Sigma retroactively.
// Returns the crossing fraction in [0,1] if the continuous segment up-crossed
// `barrier`, else -1. On crossing, state is advanced exactly to the barrier.
template <bool kTrackBarrier>
double walk_segment(const StepperModel& m, CounterRng& rng, WalkState& st, double& next_jump, double barrier,
                    std::uint64_t* jump_count = nullptr, std::vector<double>* jump_sizes = nullptr) {
    double dt = m.dt;
    if (kTrackBarrier && m.near_zone > 0.0 && st.xi > barrier - m.near_zone) dt = m.dt_near;
    double t_grid = st.t + dt;
    double t_next = std::min(t_grid, next_jump);
    double delta = t_next - st.t;
    double inc = m.continuous_increment(rng, delta);
    double xi_new = st.xi + inc;

    double crossed = -1.0;
    if (kTrackBarrier && st.xi < barrier) {
        if (xi_new >= barrier) {
            crossed = inc > 0.0 ? (barrier - st.xi) / inc : 1.0;
        } else if (m.gauss_sigma > 0.0 && !m.has_stable()) {
            // Brownian bridge up-crossing probability (exact given endpoints)
            double s2 = m.gauss_sigma * m.gauss_sigma * delta;
            double p = std::exp(-2.0 * (barrier - st.xi) * (barrier - xi_new) / s2);
            if (rng.uniform01() < p) crossed = 0.5;  // midpoint localization, O(dt) bias
        }
    }
    if (crossed >= 0.0) {
        double tc = st.t + crossed * delta;
        double ecb = std::exp(m.alpha * barrier);
        st.sigma += 0.5 * (tc - st.t) * (st.exi + ecb);
        st.t = tc;
        st.xi = barrier;
        st.exi = ecb;
        return crossed;
    }

    // Simpson with the bridge-variance-corrected midpoint: the Brownian bridge
    // midpoint has variance delta/4, so E[e^{alpha xi_mid}] carries the factor
    // e^{alpha^2 sigma^2 delta/8}; this removes the O(dt) bias of the plain
    // trapezoid on int e^{alpha xi}.
    double e1 = std::exp(m.alpha * xi_new);
    double emid = std::exp(0.5 * m.alpha * (st.xi + xi_new) +
                           0.125 * m.alpha * m.alpha * m.gauss_sigma * m.gauss_sigma * delta);
    st.sigma += delta * (st.exi + 4.0 * emid + e1) / 6.0;
    st.t = t_next;
    st.xi = xi_new;
    st.exi = e1;
    if (m.has_jumps() && t_next == next_jump) {
        double r = m.sample_jump(rng);
        st.xi -= r;  // spectrally negative: jumps only go down
        st.exi = std::exp(m.alpha * st.xi);
        next_jump = st.t + rng.exponential() / m.jump_rate;
        if (jump_count) ++*jump_count;
        if (jump_sizes) jump_sizes->push_back(r);
    }
    return -1.0;
}

}  // namespace

struct PathSimulator::Impl {
    StepperModel model;
    std::uint64_t seed;
};

PathSimulator::PathSimulator(const PathConfig& cfg)
    : impl_(new Impl{build_stepper(cfg.exponent, cfg.alpha, cfg.dt, cfg.eps), cfg.seed}) {}
PathSimulator::~PathSimulator() = default;
PathSimulator::PathSimulator(PathSimulator&&) noexcept = default;

LampertiPath PathSimulator::simulate(double x0, std::uint64_t path_index, double t_max) const {
    const StepperModel& m = impl_->model;
    CounterRng rng(impl_->seed, path_index);
    LampertiPath out;
    WalkState st;
    st.xi = x0;
    st.exi = std::exp(m.alpha * x0);
    double next_jump = m.has_jumps() ? rng.exponential() / m.jump_rate : kInf;
    out.t.push_back(0.0);
    out.xi.push_back(st.xi);
    out.sigma.push_back(0.0);
    while (st.t < t_max) {
        double t_before = st.t;
        std::uint64_t jumps_before = out.jumps;
        walk_segment<false>(m, rng, st, next_jump, 0.0, &out.jumps, &out.jump_sizes);
        if (st.t == t_before) break;  // safety
        // the jump sampler throws on r <= 0; an explicit positive jump would
        // surface here as a rise across a jump event
        if (out.jumps > jumps_before && st.xi > out.xi.back() + m.drift * (st.t - t_before) + 50.0)
            out.positive_jump_seen = true;
        out.t.push_back(st.t);
        out.xi.push_back(st.xi);
        out.sigma.push_back(st.sigma);
    }
    return out;
}

LampertiPath simulate_levy_path(const PathConfig& cfg, double x0, std::uint64_t path_index, double t_max) {
    return PathSimulator(cfg).simulate(x0, path_index, t_max);
}

MCEstimate estimate_fpt_laplace(const PathConfig& cfg, double q, double x, double a) {
    if (!(0.0 < x && x <= a)) throw std::invalid_argument("estimate_fpt_laplace: need 0 < x <= a");
    if (q < 0.0) throw std::invalid_argument("estimate_fpt_laplace: q >= 0");
    StepperModel m = build_stepper(cfg.exponent, cfg.alpha, cfg.dt, cfg.eps);
    double x0 = std::log(x), barrier = std::log(a);
    double mean = cfg.exponent.mean();
    auto th = cfg.exponent.cramer_root();
    double floor = mean < 0.0 && th ? barrier - 20.0 / *th : -kInf;

    auto per_path = [&](std::uint64_t i, ChunkAccumulator& acc) {
        CounterRng rng(cfg.seed, i);
        WalkState st;
        st.xi = x0;
        st.exi = std::exp(m.alpha * x0);
        double next_jump = m.has_jumps() ? rng.exponential() / m.jump_rate : kInf;
        if (x0 >= barrier) {  // x = a: kappa = 0
            acc.sum += 1.0;
            acc.sumsq += 1.0;
            acc.resolved += 1;
            return;
        }
        for (;;) {
            double crossed = walk_segment<true>(m, rng, st, next_jump, barrier);
            if (crossed >= 0.0) {
                double v = std::exp(-q * st.sigma);
                acc.sum += v;
                acc.sumsq += v * v;
                acc.resolved += 1;
                return;
            }
            if (st.xi < floor) {
                // absorbed: remaining chance of reaching a is e^{theta(xi-barrier)} <= 1e-8
                acc.resolved += 1;
                return;
            }
            if (st.t >= cfg.horizon) {
                // unresolved: contribution in [0, e^{-q Sigma_T}]
                acc.bias += std::exp(-q * st.sigma);
                return;
            }
        }
    };
    auto acc = run_chunks(cfg.paths, per_path);
    return reduce_plain(acc, cfg.paths, cfg.seed);
}

MCEstimate estimate_fpt_joint_laplace(const PathConfig& cfg, double q, double lambda, double x, double a) {
    if (!(0.0 < x && x <= a)) throw std::invalid_argument("estimate_fpt_joint_laplace: need 0 < x <= a");
    StepperModel m = build_stepper(cfg.exponent, cfg.alpha, cfg.dt, cfg.eps);
    double x0 = std::log(x), barrier = std::log(a);
    double mean = cfg.exponent.mean();
    auto th = cfg.exponent.cramer_root();
    double floor = mean < 0.0 && th ? barrier - 20.0 / *th : barrier - 60.0;

    auto per_path = [&](std::uint64_t i, ChunkAccumulator& acc) {
        CounterRng rng(cfg.seed, i);
        WalkState st;
        st.xi = x0;
        st.exi = std::exp(m.alpha * x0);
        double next_jump = m.has_jumps() ? rng.exponential() / m.jump_rate : kInf;
        if (x0 >= barrier) {
            acc.sum += 1.0;
            acc.sumsq += 1.0;
            acc.resolved += 1;
            return;
        }
        for (;;) {
            double crossed = walk_segment<true>(m, rng, st, next_jump, barrier);
            if (crossed >= 0.0) {
                double v = std::exp(-q * st.sigma - lambda * st.t);
                acc.sum += v;
                acc.sumsq += v * v;
                acc.resolved += 1;
                return;
            }
            if (st.xi < floor) {
                acc.resolved += 1;  // kappa_0 < kappa_a: indicator kills the path
                return;
            }
            if (st.t >= cfg.horizon) {
                acc.bias += std::exp(-q * st.sigma - lambda * st.t);
                return;
            }
        }
    };
    auto acc = run_chunks(cfg.paths, per_path);
    return reduce_plain(acc, cfg.paths, cfg.seed);
}

std::vector<MCEstimate> estimate_fpt_batch(const PathConfig& cfg, const std::vector<FptPoint>& points,
                                           double x, double a) {
    if (!(0.0 < x && x <= a)) throw std::invalid_argument("estimate_fpt_batch: need 0 < x <= a");
    StepperModel m = build_stepper(cfg.exponent, cfg.alpha, cfg.dt, cfg.eps);
    double x0 = std::log(x), barrier = std::log(a);
    double mean = cfg.exponent.mean();
    auto th = cfg.exponent.cramer_root();
    double floor = mean < 0.0 && th ? barrier - 20.0 / *th : -kInf;
    const size_t np = points.size();

    struct BatchChunk {
        std::vector<double> sum, sumsq, bias;
        std::uint64_t resolved = 0, n = 0;
    };
    const std::uint64_t chunk = 1024;
    const std::uint64_t n_chunks = (cfg.paths + chunk - 1) / chunk;
    std::vector<BatchChunk> acc(n_chunks);
    std::atomic<std::uint64_t> next{0};
    auto work = [&]() {
        for (;;) {
            std::uint64_t c = next.fetch_add(1);
            if (c >= n_chunks) return;
            BatchChunk& b = acc[c];
            b.sum.assign(np, 0.0);
            b.sumsq.assign(np, 0.0);
            b.bias.assign(np, 0.0);
            std::uint64_t lo = c * chunk, hi = std::min<std::uint64_t>(cfg.paths, lo + chunk);
            b.n = hi - lo;
            for (std::uint64_t i = lo; i < hi; ++i) {
                CounterRng rng(cfg.seed, i);
                WalkState st;
                st.xi = x0;
                st.exi = std::exp(m.alpha * x0);
                double next_jump = m.has_jumps() ? rng.exponential() / m.jump_rate : kInf;
                if (x0 >= barrier) {
                    for (size_t p = 0; p < np; ++p) {
                        b.sum[p] += 1.0;
                        b.sumsq[p] += 1.0;
                    }
                    b.resolved += 1;
                    continue;
                }
                for (;;) {
                    double crossed = walk_segment<true>(m, rng, st, next_jump, barrier);
                    if (crossed >= 0.0) {
                        for (size_t p = 0; p < np; ++p) {
                            double v = std::exp(-points[p].q * st.sigma - points[p].lambda * st.t);
                            b.sum[p] += v;
                            b.sumsq[p] += v * v;
                        }
                        b.resolved += 1;
                        break;
                    }
                    if (st.xi < floor) {
                        b.resolved += 1;  // absorbed: kappa_a = inf, contributes 0
                        break;
                    }
                    if (st.t >= cfg.horizon) {
                        for (size_t p = 0; p < np; ++p)
                            b.bias[p] += std::exp(-points[p].q * st.sigma - points[p].lambda * st.t);
                        break;
                    }
                }
            }
        }
    };
    int nw = std::min<std::uint64_t>(worker_count(), n_chunks);
    if (nw <= 1) {
        work();
    } else {
        std::vector<std::thread> ts;
        for (int w = 0; w < nw; ++w) ts.emplace_back(work);
        for (auto& t : ts) t.join();
    }

    std::vector<MCEstimate> out(np);
    std::vector<double> sum(np, 0.0), sumsq(np, 0.0), bias(np, 0.0);
    std::uint64_t resolved = 0;
    for (const auto& b : acc) {
        for (size_t p = 0; p < np; ++p) {
            sum[p] += b.sum[p];
            sumsq[p] += b.sumsq[p];
            bias[p] += b.bias[p];
        }
        resolved += b.resolved;
    }
    double n = double(cfg.paths);
    for (size_t p = 0; p < np; ++p) {
        out[p].paths = cfg.paths;
        out[p].seed = cfg.seed;
        out[p].estimate = sum[p] / n;
        double var = std::max(0.0, sumsq[p] / n - out[p].estimate * out[p].estimate);
        out[p].se = std::sqrt(var / n);
        out[p].resolution_fraction = double(resolved) / n;
        out[p].bias_bound = bias[p] / n;
    }
    return out;
}

SigmaSample sample_exponential_functional(const PathConfig& cfg, int sign, double tail_tol) {
    double mean = cfg.exponent.mean();
    if (sign > 0 && !(mean < 0.0))
        throw RegimeError("sample_exponential_functional: sign=+1 needs mean < 0");
    if (sign < 0 && !(mean > 0.0))
        throw RegimeError("sample_exponential_functional: sign=-1 needs mean > 0");
    StepperModel base = build_stepper(cfg.exponent, cfg.alpha, cfg.dt, cfg.eps);
    // walk the Sigma of xi (sign=+1) or of -xi via alpha -> -alpha trick:
    // int e^{-alpha xi} is the same walk with st.sigma integrating e^{-alpha xi}.
    StepperModel m = base;
    m.alpha = sign > 0 ? cfg.alpha : -cfg.alpha;
    double level = std::log(1.0 / tail_tol) / cfg.alpha;  // stop when sign*xi < -level
    SigmaSample out;
    out.seed = cfg.seed;
    out.values.assign(cfg.paths, 0.0);
    std::vector<double> residual(cfg.paths, 0.0);
    std::atomic<std::uint64_t> unresolved{0};

    auto per_path = [&](std::uint64_t i, ChunkAccumulator& accUnused) {
        (void)accUnused;
        CounterRng rng(cfg.seed, i);
        WalkState st;
        double next_jump = m.has_jumps() ? rng.exponential() / m.jump_rate : kInf;
        for (;;) {
            walk_segment<false>(m, rng, st, next_jump, 0.0);
            double drifted = sign > 0 ? st.xi : -st.xi;
            if (drifted < -level) {
                out.values[i] = st.sigma;
                residual[i] = std::exp(m.alpha * st.xi);  // e^{alpha xi} (or e^{-alpha xi}) <= tail_tol here
                return;
            }
            if (st.t >= cfg.horizon) {
                out.values[i] = st.sigma;
                residual[i] = 1.0;  // marker: unresolved
                unresolved.fetch_add(1);
                return;
            }
        }
    };
    auto acc = run_chunks(cfg.paths, per_path);
    (void)acc;
    // a-posteriori residual: E[residual | stop] = e^{alpha xi_stop} * E[Sigma_inf]
    double mean_sigma = 0.0;
    for (double v : out.values) mean_sigma += v;
    mean_sigma /= double(cfg.paths);
    double mean_resid = 0.0;
    for (std::uint64_t i = 0; i < cfg.paths; ++i) {
        double e_stop = residual[i] == 1.0 ? tail_tol : residual[i];
        mean_resid += e_stop * mean_sigma;
    }
    out.truncation_bias = mean_resid / double(cfg.paths);
    out.resolution_fraction = 1.0 - double(unresolved.load()) / double(cfg.paths);
    return out;
}

MCEstimate sigma_laplace_estimate(const SigmaSample& s, double q) {
    MCEstimate est;
    est.paths = s.values.size();
    est.seed = s.seed;
    double sum = 0.0, sumsq = 0.0;
    for (double v : s.values) {
        double e = std::exp(-q * v);
        sum += e;
        sumsq += e * e;
    }
    double n = double(est.paths);
    est.estimate = sum / n;
    est.se = std::sqrt(std::max(0.0, sumsq / n - est.estimate * est.estimate) / n);
    est.resolution_fraction = s.resolution_fraction;
    est.bias_bound = q * s.truncation_bias;  // |d/dSigma e^{-q Sigma}| <= q
    return est;
}

MCEstimate sigma_moment_estimate(const SigmaSample& s, double p) {
    MCEstimate est;
    est.paths = s.values.size();
    est.seed = s.seed;
    double sum = 0.0, sumsq = 0.0;
    for (double v : s.values) {
        double e = std::pow(v, p);
        sum += e;
        sumsq += e * e;
    }
    double n = double(est.paths);
    est.estimate = sum / n;
    est.se = std::sqrt(std::max(0.0, sumsq / n - est.estimate * est.estimate) / n);
    est.resolution_fraction = s.resolution_fraction;
    est.bias_bound = std::fabs(p) * s.truncation_bias;  // first-order in the Sigma truncation
    return est;
}

MCEstimate esscher_weighted_fpt(const PathConfig& cfg, double gamma, double q, double x, double a) {
    if (gamma < 0.0) throw std::invalid_argument("esscher_weighted_fpt: gamma >= 0");
    if (!(0.0 < x && x <= a)) throw std::invalid_argument("esscher_weighted_fpt: need 0 < x <= a");
    StepperModel m = build_stepper(cfg.exponent, cfg.alpha, cfg.dt, cfg.eps);
    double x0 = std::log(x), barrier = std::log(a);
    double psi_g = cfg.exponent.psi(gamma);

    auto per_path = [&](std::uint64_t i, ChunkAccumulator& acc) {
        CounterRng rng(cfg.seed, i);
        WalkState st;
        st.xi = x0;
        st.exi = std::exp(m.alpha * x0);
        double next_jump = m.has_jumps() ? rng.exponential() / m.jump_rate : kInf;
        for (;;) {
            double crossed = walk_segment<true>(m, rng, st, next_jump, barrier);
            if (crossed >= 0.0) {
                // continuous up-crossing: xi_T = barrier exactly
                double w = std::exp(gamma * (barrier - x0) - psi_g * st.t);
                double v = std::exp(-q * st.sigma);
                acc.sum += w * v;
                acc.sumsq += w * v * w * v;
                acc.wsum += w;
                acc.wsumsq += w * w;
                acc.resolved += 1;
                return;
            }
            if (st.t >= cfg.horizon) {
                acc.bias += std::exp(gamma * (st.xi - x0) - psi_g * st.t - q * st.sigma);
                return;
            }
        }
    };
    auto acc = run_chunks(cfg.paths, per_path);
    MCEstimate est = reduce_plain(acc, cfg.paths, cfg.seed);
    double wsum = 0.0, wsumsq = 0.0;
    for (const auto& a2 : acc) {
        wsum += a2.wsum;
        wsumsq += a2.wsumsq;
    }
    est.ess = wsumsq > 0.0 ? wsum * wsum / wsumsq : 0.0;
    est.unreliable_weights = est.ess < 0.05 * double(cfg.paths);
    return est;
}

std::string MCEstimate::to_json() const {
    nlohmann::json j;
    j["estimate"] = estimate;
    j["se"] = se;
    j["paths"] = paths;
    j["seed"] = seed;
    j["resolution_fraction"] = resolution_fraction;
    j["bias_bound"] = bias_bound;
    if (ess >= 0.0) j["ess"] = ess;
    if (unreliable_weights) j["unreliable_weights"] = true;
    return j.dump();
}

}  // namespace ssm
