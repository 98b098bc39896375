#include "ssm/divisibility.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ssm/eigenfunction.hpp"
#include "json.hpp"

namespace ssm {

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> g(static_cast<size_t>(n), 0.0);
    double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < n; ++i) g[size_t(i)] = std::exp(llo + (lhi - llo) * i / double(n - 1));
    return g;
}

DivisibilityReport complete_monotonicity_check(const std::function<double(double)>& f,
                                               const std::vector<double>& grid, int order_max,
                                               double f_rel_accuracy, const std::string& target) {
    DivisibilityReport rep;
    rep.target = target;
    rep.grid = grid;
    rep.order_max = order_max;

    std::vector<double> binom(size_t(order_max) + 1);
    bool any_fail = false, any_noise = false;

    for (int n = 1; n <= order_max; ++n) {
        binom[0] = 1.0;
        for (int j = 1; j <= n; ++j) binom[size_t(j)] = binom[size_t(j - 1)] * (n - j + 1) / double(j);

        OrderMargin om{n, 1.0, grid.front(), false};
        for (double u : grid) {
            double h = 0.4 * u / n;  // keeps the stencil within a factor ~1.4 of u
            double signed_sum = 0.0, abs_sum = 0.0;
            for (int j = 0; j <= n; ++j) {
                double v = f(u + j * h);
                double w = binom[size_t(j)] * v;
                signed_sum += (j % 2 == 0 ? 1.0 : -1.0) * w;
                abs_sum += std::fabs(w);
            }
            if (abs_sum == 0.0) continue;
            double margin = signed_sum / abs_sum;  // = (-1)^n Delta^n f / sum|...|
            if (margin < om.min_margin) {
                om.min_margin = margin;
                om.at_point = u;
            }
        }
        // noise floor of the normalized margin: relative accuracy of f itself
        double noise = 8.0 * f_rel_accuracy;
        if (om.min_margin < -kTolCM) {
            if (std::fabs(om.min_margin) <= noise) {
                om.noise_limited = true;
                any_noise = true;
            } else {
                any_fail = true;
            }
        }
        rep.margins.push_back(om);
    }
    if (any_fail) {
        rep.verdict = Verdict::fail;
    } else if (any_noise) {
        rep.verdict = Verdict::inconclusive;
        rep.warnings.push_back("negative margins within the differencing noise floor");
    } else {
        rep.verdict = Verdict::pass;
    }
    return rep;
}

DivisibilityReport selfdecomp_check(const CharacteristicExponent& e, double alpha,
                                    const std::vector<double>& c_values, const std::vector<double>& grid,
                                    int order_max) {
    e.require_admissible(alpha);
    Eigenfunction I(e, alpha);
    DivisibilityReport combined;
    combined.target = "selfdecomp residual I(cq)/I(q)";
    combined.grid = grid;
    combined.order_max = order_max;
    combined.verdict = Verdict::pass;
    for (double c : c_values) {
        if (!(c > 0.0 && c <= 1.0)) throw std::domain_error("selfdecomp_check: c in (0,1]");
        auto ratio = [&](double q) {
            if (q == 0.0) return 1.0;
            return std::exp(I.eval(c * q).log_value - I.eval(q).log_value);
        };
        std::ostringstream name;
        name << "I(" << c << " q)/I(q)";
        DivisibilityReport rep = complete_monotonicity_check(ratio, grid, order_max, 1e-13, name.str());
        for (auto& om : rep.margins) combined.margins.push_back(om);
        for (auto& w : rep.warnings) combined.warnings.push_back(w);
        if (rep.verdict == Verdict::fail) combined.verdict = Verdict::fail;
        else if (rep.verdict == Verdict::inconclusive && combined.verdict == Verdict::pass)
            combined.verdict = Verdict::inconclusive;
    }
    return combined;
}

namespace {

// Stehfest coefficients zeta_1..zeta_{2m} in double-double (the alternating
// sum loses ~0.6 m digits; exact rational pieces keep the coefficients clean).
std::vector<dd> stehfest_coefficients(int terms) {
    int m = terms / 2;
    std::vector<dd> zeta(size_t(terms) + 1, dd(0.0));
    // pascal triangle in exact doubles (fits: C(34,17) < 2^53)
    auto choose = [](int n, int k) {
        double r = 1.0;
        for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
        return std::round(r);
    };
    double mfact = 1.0;
    for (int i = 2; i <= m; ++i) mfact *= i;
    for (int k = 1; k <= terms; ++k) {
        dd s(0.0);
        for (int j = (k + 1) / 2; j <= std::min(k, m); ++j) {
            dd t(1.0);
            for (int p = 0; p < m + 1; ++p) t = t * double(j);  // j^{m+1} exactly in dd
            t = t / mfact;
            t = t * choose(m, j) * choose(2 * j, j) * choose(j, k - j);
            s = s + t;
        }
        if ((m + k) % 2 != 0) s = -s;
        zeta[size_t(k)] = s;
    }
    return zeta;
}

double gs_value(const LaplaceTransformFn& f, const std::vector<dd>& zeta, int terms, double t) {
    const dd ln2{6.931471805599452862e-01, 2.319046813846299558e-17};
    dd tau = ln2 / t;
    dd acc(0.0);
    for (int k = 1; k <= terms; ++k) {
        dd q = tau * double(k);
        dd fv = f.eval_dd ? f.eval_dd(q) : dd(f.eval(q.to_double()));
        acc = acc + zeta[size_t(k)] * fv;
    }
    return (acc * tau).to_double();
}

}  // namespace

InversionGrid laplace_invert(const LaplaceTransformFn& f, const std::vector<double>& t_grid, int terms) {
    if (terms < 4 || terms % 2 != 0) throw std::domain_error("laplace_invert: terms must be even and >= 4");
    InversionGrid out;
    out.t = t_grid;
    auto zeta = stehfest_coefficients(terms);
    auto zeta_lo = stehfest_coefficients(terms - 2);
    int negatives = 0;
    for (double t : t_grid) {
        double v = gs_value(f, zeta, terms, t);
        double v2 = gs_value(f, zeta_lo, terms - 2, t);
        out.density.push_back(v);
        out.error_estimate.push_back(std::fabs(v - v2));
        if (v < -kTolInv * std::max(1.0, std::fabs(v2))) ++negatives;
    }
    if (negatives > int(t_grid.size()) / 10) {
        out.stable = false;  // oscillatory output beyond tolerance: inversion-unstable
    }
    return out;
}

UnimodalityResult unimodality_check(const InversionGrid& grid) {
    UnimodalityResult res;
    size_t n = grid.t.size();
    if (n < 3) return res;
    // collapse consecutive differences into a sign sequence, dropping changes
    // that are inside the error bars
    std::vector<int> signs;
    std::vector<size_t> where;
    for (size_t i = 0; i + 1 < n; ++i) {
        double d = grid.density[i + 1] - grid.density[i];
        double err = grid.error_estimate[i + 1] + grid.error_estimate[i];
        if (std::fabs(d) <= err) continue;
        int s = d > 0.0 ? 1 : -1;
        if (signs.empty() || signs.back() != s) {
            signs.push_back(s);
            where.push_back(i);
        }
    }
    if (signs.empty()) {
        res.verdict = Verdict::inconclusive;
        return res;
    }
    int down_up = 0, up_down = 0;
    for (size_t i = 0; i + 1 < signs.size(); ++i) {
        if (signs[i] > 0 && signs[i + 1] < 0) ++up_down;
        if (signs[i] < 0 && signs[i + 1] > 0) ++down_up;
    }
    if (up_down <= 1 && down_up == 0) {
        res.verdict = Verdict::pass;
        // mode: grid argmax
        size_t best = 0;
        for (size_t i = 1; i < n; ++i)
            if (grid.density[i] > grid.density[best]) best = i;
        res.mode = grid.t[best];
    } else {
        res.verdict = Verdict::fail;
        size_t best = 0;
        for (size_t i = 1; i < n; ++i)
            if (grid.density[i] > grid.density[best]) best = i;
        res.mode = grid.t[best];
    }
    return res;
}

std::string DivisibilityReport::to_json() const {
    nlohmann::json j;
    j["target"] = target;
    j["grid"] = {{"count", grid.size()},
                 {"lo", grid.empty() ? 0.0 : grid.front()},
                 {"hi", grid.empty() ? 0.0 : grid.back()}};
    j["order_max"] = order_max;
    auto marr = nlohmann::json::array();
    for (const auto& m : margins) {
        marr.push_back({{"order", m.order},
                        {"min_margin", m.min_margin},
                        {"at", m.at_point},
                        {"noise_limited", m.noise_limited}});
    }
    j["margins"] = marr;
    j["verdict"] = verdict_name(verdict);
    j["warnings"] = warnings;
    return j.dump(2);
}

std::string InversionGrid::to_json() const {
    nlohmann::json j;
    j["method"] = method;
    j["stable"] = stable;
    j["t"] = t;
    j["density"] = density;
    j["error_estimate"] = error_estimate;
    return j.dump(2);
}

}  // namespace ssm
