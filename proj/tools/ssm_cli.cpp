// Command line front end: evaluate the eigenfunction machinery, run the
// divisibility certificates and Monte Carlo cross-checks, emit plot-ready CSV
// plus a JSON summary.
//
// Exit codes: 0 ok, 1 malformed config, 2 regime violation, 3 check failure,
// 4 inconclusive numerical certificate.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ssm/acceptance.hpp"
#include "ssm/divisibility.hpp"
#include "ssm/gammafun.hpp"
#include "ssm/eigenfunction.hpp"
#include "ssm/family_json.hpp"
#include "ssm/montecarlo.hpp"
#include "ssm/special_cases.hpp"
#include "ssm/transforms.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRegime = 2;
constexpr int kExitCheckFailed = 3;
constexpr int kExitInconclusive = 4;

// 17 significant digits: doubles round-trip exactly, outputs are byte-stable
std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct CsvWriter {
    std::ostringstream os;
    explicit CsvWriter(const std::vector<std::string>& header) {
        for (size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
        os << '\n';
    }
    void row(const std::vector<double>& vals) {
        for (size_t i = 0; i < vals.size(); ++i) os << (i ? "," : "") << num(vals[i]);
        os << '\n';
    }
    void write(const std::string& path) const {
        std::ofstream f(path, std::ios::binary);
        f << os.str();
    }
};

struct FamilyOptions {
    std::string family;
    std::string family_json;
    double gamma = 0.0;
    double rho = 1.5;
    double c = 1.0;
    double beta = 1.0;
    double esscher = 0.0;
    bool gamma_set = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--family", family, "family name: brownian|stable|pochhammer");
        cmd->add_option("--family-json", family_json, "family spec as a JSON document or @file");
        cmd->add_option("--gamma", gamma, "drift / family gamma")->each([this](const std::string&) {
            gamma_set = true;
        });
        cmd->add_option("--rho", rho, "stability / pochhammer index in (1,2)");
        cmd->add_option("--c", c, "stable scale");
        cmd->add_option("--beta", beta, "pochhammer beta scale");
        cmd->add_option("--esscher", esscher, "Esscher shift applied after construction");
    }

    ssm::CharacteristicExponent build() const {
        if (!family_json.empty()) {
            std::string text = family_json;
            if (text.size() > 1 && text[0] == '@') {
                std::ifstream f(text.substr(1));
                if (!f) throw ssm::ConfigError("cannot open family file", text.substr(1));
                std::stringstream ss;
                ss << f.rdbuf();
                text = ss.str();
            }
            return ssm::family_from_json(text);
        }
        json j;
        if (family == "brownian" || family == "brownian_drift") {
            j = {{"family", "brownian_drift"}, {"gamma", gamma}};
        } else if (family == "stable") {
            j = {{"family", "stable"}, {"rho", rho}, {"c", c}};
        } else if (family == "pochhammer") {
            j = {{"family", "pochhammer"}, {"rho", rho}, {"beta", beta}, {"gamma", gamma}};
        } else {
            throw ssm::ConfigError("unknown or missing family '" + family + "'", "family");
        }
        if (esscher > 0.0) j["esscher_shift"] = esscher;
        return ssm::family_from_json(j.dump());
    }
};

std::vector<double> make_grid(double lo, double hi, int count, bool log_spaced) {
    std::vector<double> g;
    if (count <= 1 || lo == hi) {
        g.push_back(lo);
        return g;
    }
    for (int i = 0; i < count; ++i) {
        double f = double(i) / (count - 1);
        g.push_back(log_spaced ? lo * std::pow(hi / lo, f) : lo + (hi - lo) * f);
    }
    return g;
}

void write_summary(const std::string& path, const json& j) {
    std::ofstream f(path, std::ios::binary);
    f << j.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectrally negative self-similar Markov toolkit"};
    app.require_subcommand(1);

    std::string out_csv = "results.csv";
    std::string out_json = "summary.json";
    app.add_option("--out-csv", out_csv, "CSV output path");
    app.add_option("--out-json", out_json, "JSON summary output path");

    FamilyOptions fam;
    double alpha = 2.0;
    double grid_lo = 0.0, grid_hi = 10.0;
    int grid_count = 11;
    bool grid_log = false;

    auto add_family_and_grid = [&](CLI::App* cmd, const char* grid_name) {
        fam.attach(cmd);
        cmd->add_option("--alpha", alpha, "self-similarity parameter alpha > 0");
        cmd->add_option((std::string("--") + grid_name + "-min").c_str(), grid_lo, "grid start");
        cmd->add_option((std::string("--") + grid_name + "-max").c_str(), grid_hi, "grid end");
        cmd->add_option("--grid-count", grid_count, "number of grid points");
        cmd->add_flag("--log-grid", grid_log, "log-spaced grid");
    };

    auto* cmd_psi = app.add_subcommand("eval-psi", "evaluate psi and psi' on a u-grid");
    add_family_and_grid(cmd_psi, "u");

    auto* cmd_I = app.add_subcommand("eval-I", "evaluate the eigenfunction series on a z-grid");
    add_family_and_grid(cmd_I, "z");
    double single_z = -1.0;
    cmd_I->add_option("--z", single_z, "single z value (overrides the grid)");

    auto* cmd_N = app.add_subcommand("eval-N", "evaluate the decreasing eigenfunction N on an x-grid");
    add_family_and_grid(cmd_N, "x");

    auto* cmd_ct = app.add_subcommand("c-theta", "compute the asymptotic constant C_theta");
    fam.attach(cmd_ct);
    cmd_ct->add_option("--alpha", alpha, "alpha");
    std::string ct_mode = "both";
    cmd_ct->add_option("--mode", ct_mode, "product|ratio|both");

    auto* cmd_fpt = app.add_subcommand("fpt", "first-passage Laplace transforms on a q-grid");
    add_family_and_grid(cmd_fpt, "q");
    double fx = 1.0, fa = 2.0, flambda = 0.0;
    cmd_fpt->add_option("--x", fx, "start level");
    cmd_fpt->add_option("--a", fa, "target level");
    cmd_fpt->add_option("--lambda", flambda, "time-change argument lambda");

    auto* cmd_exp = app.add_subcommand("expfun", "Laplace transform of the exponential functional");
    add_family_and_grid(cmd_exp, "q");

    auto* cmd_ent = app.add_subcommand("entrance", "entrance-law Laplace transforms");
    add_family_and_grid(cmd_ent, "q");
    double ent_y = 1.0;
    std::string ent_kind = "dual";
    cmd_ent->add_option("--y", ent_y, "space argument y > 0");
    cmd_ent->add_option("--kind", ent_kind, "dual|dual_theta");

    auto* cmd_hart = app.add_subcommand("hartman", "Hartman ratio on a lambda-grid");
    add_family_and_grid(cmd_hart, "lambda");
    double ha = 1.0, hA = 3.0;
    cmd_hart->add_option("--a", ha, "lower level");
    cmd_hart->add_option("--A", hA, "upper level");

    auto* cmd_wolfe = app.add_subcommand("wolfe", "Wolfe subordinator exponent and id transforms");
    add_family_and_grid(cmd_wolfe, "q");

    auto* cmd_div = app.add_subcommand("check-divisibility",
                                       "complete-monotonicity certificates for the family");
    fam.attach(cmd_div);
    cmd_div->add_option("--alpha", alpha, "alpha");
    int div_order = 6;
    cmd_div->add_option("--order", div_order, "max finite-difference order");

    auto* cmd_inv = app.add_subcommand("invert", "Gaver-Stehfest inversion of 1/I or N");
    add_family_and_grid(cmd_inv, "t");
    int inv_terms = 18;
    std::string inv_target = "selfdecomp";
    cmd_inv->add_option("--terms", inv_terms, "Stehfest term count (even)");
    cmd_inv->add_option("--target", inv_target, "selfdecomp|expfun");

    auto* cmd_mc = app.add_subcommand("mc-verify", "Monte Carlo cross-check of a transform");
    fam.attach(cmd_mc);
    cmd_mc->add_option("--alpha", alpha, "alpha");
    std::string mc_target = "fpt";
    double mq = 1.0, mlambda = 0.0, mx = 1.0, ma = 2.0;
    std::uint64_t m_paths = 100000, m_seed = 7;
    double m_dt = 1e-2, m_eps = 0.0;
    cmd_mc->add_option("--target", mc_target, "fpt|joint|expfun|rivero");
    cmd_mc->add_option("--q", mq, "transform argument");
    cmd_mc->add_option("--lambda", mlambda, "lambda (joint)");
    cmd_mc->add_option("--x", mx, "start level");
    cmd_mc->add_option("--a", ma, "target level");
    cmd_mc->add_option("--paths", m_paths, "path count");
    cmd_mc->add_option("--seed", m_seed, "base seed");
    cmd_mc->add_option("--dt", m_dt, "time step");
    cmd_mc->add_option("--eps", m_eps, "small-jump truncation (0: default)");

    auto* cmd_info = app.add_subcommand("family-info", "derived scalars of the family");
    fam.attach(cmd_info);
    cmd_info->add_option("--alpha", alpha, "alpha");

    auto* cmd_suite = app.add_subcommand("suite", "run the full verification battery");
    std::uint64_t s_seed = 7, s_paths = 100000;
    bool s_quick = false;
    cmd_suite->add_option("--seed", s_seed, "base seed");
    cmd_suite->add_option("--paths", s_paths, "MC path count");
    cmd_suite->add_flag("--quick", s_quick, "reduced MC path counts");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitConfig;
    }

    try {
        json summary;
        summary["command"] = app.get_subcommands().front()->get_name();

        if (cmd_psi->parsed()) {
            auto e = fam.build();
            CsvWriter csv({"u", "psi", "psi_prime"});
            for (double u : make_grid(grid_lo, grid_hi, grid_count, grid_log))
                csv.row({u, e.psi(u), e.psi_prime(u)});
            csv.write(out_csv);
            summary["family"] = json::parse(ssm::family_to_json(e));
            write_summary(out_json, summary);
            return kExitOk;
        }

        if (cmd_I->parsed()) {
            auto e = fam.build();
            ssm::Eigenfunction I(e, alpha);
            CsvWriter csv({"z", "I", "log_I", "I_prime"});
            auto grid = single_z >= 0.0 ? std::vector<double>{single_z}
                                        : make_grid(grid_lo, grid_hi, grid_count, grid_log);
            for (double z : grid) {
                auto v = I.eval(z);
                csv.row({z, v.value, v.log_value, I.eval_derivative(z).value});
            }
            csv.write(out_csv);
            summary["family"] = json::parse(ssm::family_to_json(e));
            write_summary(out_json, summary);
            return kExitOk;
        }

        if (cmd_N->parsed()) {
            auto e = fam.build();
            auto prof = ssm::c_theta(e, alpha, ssm::CThetaMode::product);
            CsvWriter csv({"x", "N", "condition", "extended_precision"});
            for (double x : make_grid(grid_lo, grid_hi, grid_count, grid_log)) {
                auto nv = ssm::eval_N(prof, e, alpha, x);
                csv.row({x, nv.value, nv.condition, nv.extended_precision ? 1.0 : 0.0});
            }
            csv.write(out_csv);
            summary["theta"] = prof.theta;
            summary["c_theta"] = prof.c_theta;
            write_summary(out_json, summary);
            return kExitOk;
        }

        if (cmd_ct->parsed()) {
            auto e = fam.build();
            CsvWriter csv({"mode", "theta", "theta_alpha", "beta", "l_beta", "c_theta"});
            json modes;
            if (ct_mode == "product" || ct_mode == "both") {
                auto p = ssm::c_theta(e, alpha, ssm::CThetaMode::product);
                csv.row({0.0, p.theta, p.theta_alpha, p.beta, p.l_beta, p.c_theta});
                modes["product"] = p.c_theta;
            }
            if (ct_mode == "ratio" || ct_mode == "ratio_estimate" || ct_mode == "both") {
                auto p = ssm::c_theta(e, alpha, ssm::CThetaMode::ratio_estimate);
                csv.row({1.0, p.theta, p.theta_alpha, p.beta, p.l_beta, p.c_theta});
                modes["ratio_estimate"] = p.c_theta;
            }
            csv.write(out_csv);
            summary["c_theta"] = modes;
            write_summary(out_json, summary);
            return kExitOk;
        }

        if (cmd_fpt->parsed()) {
            auto e = fam.build();
            CsvWriter csv({"q", "fpt_up", "fpt_joint", "levy_functional"});
            for (double q : make_grid(grid_lo, grid_hi, grid_count, grid_log)) {
                csv.row({q, ssm::fpt_up_laplace(e, alpha, q, fx, fa),
                         ssm::fpt_joint_laplace(e, alpha, q, flambda, fx, fa),
                         ssm::levy_fpt_functional_laplace(e, alpha, q, flambda, std::log(fx), std::log(fa))});
            }
            csv.write(out_csv);
            write_summary(out_json, summary);
            return kExitOk;
        }

        if (cmd_exp->parsed()) {
            auto e = fam.build();
            auto prof = ssm::c_theta(e, alpha, ssm::CThetaMode::product);
            CsvWriter csv({"q", "expfun"});
            for (double q : make_grid(grid_lo, grid_hi, grid_count, grid_log))
                csv.row({q, ssm::eval_N(prof, e, alpha, q).value});
            csv.write(out_csv);
            write_summary(out_json, summary);
            return kExitOk;
        }

        if (cmd_ent->parsed()) {
            auto e = fam.build();
            auto kind = ent_kind == "dual_theta" ? ssm::EntranceKind::dual_theta : ssm::EntranceKind::dual;
            CsvWriter csv({"q", "entrance"});
            for (double q : make_grid(grid_lo, grid_hi, grid_count, grid_log))
                csv.row({q, ssm::entrance_law_laplace(e, alpha, q, ent_y, kind)});
            csv.write(out_csv);
            write_summary(out_json, summary);
            return kExitOk;
        }

        if (cmd_hart->parsed()) {
            auto e = fam.build();
            CsvWriter csv({"lambda", "hartman_ratio"});
            for (double l : make_grid(grid_lo, grid_hi, grid_count, grid_log))
                csv.row({l, ssm::hartman_ratio(e, alpha, l, ha, hA)});
            csv.write(out_csv);
            write_summary(out_json, summary);
            return kExitOk;
        }

        if (cmd_wolfe->parsed()) {
            auto e = fam.build();
            CsvWriter csv({"q", "phi_L", "id_bare", "id_combined", "selfdecomp"});
            for (double q : make_grid(grid_lo, grid_hi, grid_count, grid_log)) {
                csv.row({q, ssm::wolfe_levy_exponent(e, alpha, q),
                         ssm::id_laplace(e, alpha, q, ssm::IdKind::bare),
                         ssm::id_laplace(e, alpha, q, ssm::IdKind::combined),
                         ssm::selfdecomp_laplace(e, alpha, q)});
            }
            csv.write(out_csv);
            write_summary(out_json, summary);
            return kExitOk;
        }

        if (cmd_div->parsed()) {
            auto e = fam.build();
            auto grid = ssm::log_grid(1e-2, 1e2, 25);
            ssm::Eigenfunction I(e, alpha);
            std::vector<ssm::DivisibilityReport> reports;
            reports.push_back(ssm::complete_monotonicity_check(
                [&](double q) { return std::exp(-I.eval(q).log_value); }, grid, div_order, 1e-12, "1/I"));
            reports.push_back(ssm::selfdecomp_check(e, alpha, {0.25, 0.5, 0.75}, grid, div_order));
            if (e.mean() < 0.0 && e.cramer_root() && *e.cramer_root() < alpha) {
                auto prof = ssm::c_theta(e, alpha, ssm::CThetaMode::product);
                reports.push_back(ssm::complete_monotonicity_check(
                    [&](double q) { return ssm::eval_N(prof, e, alpha, q).value; }, grid, div_order, 1e-10,
                    "N"));
            }
            if (e.mean() >= 0.0) {
                reports.push_back(ssm::complete_monotonicity_check(
                    [&](double l) { return ssm::hartman_ratio(e, alpha, l, 1.0, 2.5); }, grid, div_order,
                    1e-11, "hartman"));
            }
            CsvWriter csv({"report", "order", "min_margin", "at", "noise_limited"});
            json jr = json::array();
            bool any_fail = false, any_inc = false;
            for (size_t ri = 0; ri < reports.size(); ++ri) {
                const auto& r = reports[ri];
                for (const auto& m : r.margins)
                    csv.row({double(ri), double(m.order), m.min_margin, m.at_point,
                             m.noise_limited ? 1.0 : 0.0});
                jr.push_back(json::parse(r.to_json()));
                if (r.verdict == ssm::Verdict::fail) any_fail = true;
                if (r.verdict == ssm::Verdict::inconclusive) any_inc = true;
            }
            csv.write(out_csv);
            summary["reports"] = jr;
            write_summary(out_json, summary);
            if (any_fail) return kExitCheckFailed;
            if (any_inc) return kExitInconclusive;
            return kExitOk;
        }

        if (cmd_inv->parsed()) {
            auto e = fam.build();
            ssm::Eigenfunction I(e, alpha);
            ssm::LaplaceTransformFn f;
            if (inv_target == "expfun") {
                auto prof = ssm::c_theta(e, alpha, ssm::CThetaMode::product);
                f.eval = [&, prof](double q) { return ssm::eval_N(prof, e, alpha, q).value; };
            } else {
                f.eval = [&](double q) { return std::exp(-I.eval(q).log_value); };
                f.eval_dd = [&](ssm::dd q) { return ssm::dd(1.0) / I.eval_dd(q); };
            }
            auto t = make_grid(grid_lo <= 0.0 ? 0.01 : grid_lo, grid_hi, std::max(grid_count, 16), true);
            auto grid = ssm::laplace_invert(f, t, inv_terms);
            auto uni = ssm::unimodality_check(grid);
            CsvWriter csv({"t", "density", "error_estimate"});
            for (size_t i = 0; i < t.size(); ++i)
                csv.row({grid.t[i], grid.density[i], grid.error_estimate[i]});
            csv.write(out_csv);
            summary["stable"] = grid.stable;
            summary["unimodal"] = ssm::verdict_name(uni.verdict);
            summary["mode"] = uni.mode;
            write_summary(out_json, summary);
            if (!grid.stable) return kExitInconclusive;
            return kExitOk;
        }

        if (cmd_mc->parsed()) {
            auto e = fam.build();
            ssm::PathConfig cfg{e};
            cfg.alpha = alpha;
            cfg.dt = m_dt;
            cfg.eps = m_eps;
            cfg.paths = m_paths;
            cfg.seed = m_seed;
            double analytic = 0.0;
            ssm::MCEstimate est;
            if (mc_target == "fpt") {
                analytic = ssm::fpt_up_laplace(e, alpha, mq, mx, ma);
                est = ssm::estimate_fpt_laplace(cfg, mq, mx, ma);
            } else if (mc_target == "joint") {
                analytic = ssm::fpt_joint_laplace(e, alpha, mq, mlambda, mx, ma);
                est = ssm::estimate_fpt_joint_laplace(cfg, mq, mlambda, mx, ma);
            } else if (mc_target == "expfun") {
                analytic = ssm::expfun_laplace(e, alpha, mq);
                auto sample = ssm::sample_exponential_functional(cfg, +1);
                est = ssm::sigma_laplace_estimate(sample, mq);
            } else if (mc_target == "rivero") {
                auto prof = ssm::c_theta(e, alpha, ssm::CThetaMode::product);
                analytic = prof.c_theta * alpha * e.psi_prime(prof.theta) /
                           ssm::gamma_fn(1.0 - prof.theta_alpha);
                ssm::PathConfig shifted_cfg{e.esscher(prof.theta)};
                shifted_cfg.alpha = alpha;
                shifted_cfg.dt = m_dt;
                shifted_cfg.paths = m_paths;
                shifted_cfg.seed = m_seed;
                auto sample = ssm::sample_exponential_functional(shifted_cfg, -1);
                est = ssm::sigma_moment_estimate(sample, prof.theta_alpha - 1.0);
            } else {
                throw ssm::ConfigError("unknown mc target '" + mc_target + "'", "target");
            }
            double dev = std::fabs(est.estimate - analytic);
            double tol = 3.0 * est.se + est.bias_bound;
            CsvWriter csv({"analytic", "mc", "se", "dev", "tol", "resolution", "paths", "seed"});
            csv.row({analytic, est.estimate, est.se, dev, tol, est.resolution_fraction,
                     double(est.paths), double(est.seed)});
            csv.write(out_csv);
            summary["analytic"] = analytic;
            summary["mc"] = json::parse(est.to_json());
            summary["within_3se"] = dev <= tol;
            write_summary(out_json, summary);
            std::printf("analytic=%s mc=%s +- %s (%s 3SE+bias)\n", num(analytic).c_str(),
                        num(est.estimate).c_str(), num(est.se).c_str(), dev <= tol ? "within" : "OUTSIDE");
            return dev <= tol ? kExitOk : kExitCheckFailed;
        }

        if (cmd_info->parsed()) {
            auto e = fam.build();
            summary["family"] = json::parse(ssm::family_to_json(e));
            summary["admissible"] = e.admissible(alpha);
            summary["alpha"] = alpha;
            if (e.mean() < 0.0 && e.cramer_root() && *e.cramer_root() < alpha) {
                auto prof = ssm::c_theta(e, alpha, ssm::CThetaMode::product);
                summary["c_theta"] = prof.c_theta;
            }
            CsvWriter csv({"mean", "theta", "beta", "l_beta", "levy_drift", "sigma"});
            auto th = e.cramer_root();
            csv.row({e.mean(), th ? *th : -1.0, e.regular_variation().beta, e.regular_variation().l,
                     e.levy_drift(), e.sigma()});
            csv.write(out_csv);
            write_summary(out_json, summary);
            std::printf("%s\n", ssm::family_to_json(e).c_str());
            return kExitOk;
        }

        if (cmd_suite->parsed()) {
            ssm::SuiteConfig sc;
            sc.seed = s_seed;
            sc.mc_paths = s_paths;
            sc.quick = s_quick;
            sc.on_result = [](const ssm::CriterionResult& r) {
                std::printf("[%s] criterion %2d %-28s (%.1fs) %s\n", r.pass ? "PASS" : "FAIL", r.id,
                            r.name.c_str(), r.seconds, r.detail.c_str());
                std::fflush(stdout);
            };
            auto results = ssm::run_acceptance_suite(sc);
            std::ofstream f(out_csv, std::ios::binary);
            f << ssm::suite_results_csv(results);
            f.close();
            json jr = json::array();
            bool any_fail = false;
            for (const auto& r : results) {
                jr.push_back({{"id", r.id},
                              {"name", r.name},
                              {"pass", r.pass},
                              {"detail", r.detail},
                              {"seconds", r.seconds}});
                if (!r.pass) any_fail = true;
            }
            summary["criteria"] = jr;
            write_summary(out_json, summary);
            return any_fail ? kExitCheckFailed : kExitOk;
        }

        throw ssm::ConfigError("no subcommand handled", "command");
    } catch (const ssm::ConfigError& ex) {
        std::fprintf(stderr, "config error: %s\n", ex.what());
        return kExitConfig;
    } catch (const ssm::RegimeError& ex) {
        std::fprintf(stderr, "regime violation: %s\n", ex.what());
        return kExitRegime;
    } catch (const std::exception& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return kExitCheckFailed;
    }
}
