#include <benchmark/benchmark.h>

#include <cmath>

#include "ssm/divisibility.hpp"
#include "ssm/eigenfunction.hpp"

namespace {

void gaver_stehfest(benchmark::State& state) {
    auto e = ssm::CharacteristicExponent::brownian_drift(0.0);
    ssm::Eigenfunction I(e, 2.0);
    ssm::LaplaceTransformFn f;
    f.eval = [&](double q) { return std::exp(-I.eval(q).log_value); };
    f.eval_dd = [&](ssm::dd q) { return ssm::dd(1.0) / I.eval_dd(q); };
    auto t = ssm::log_grid(0.05, 20.0, 40);
    I.eval(500.0);  // warm cache
    for (auto _ : state) {
        benchmark::DoNotOptimize(ssm::laplace_invert(f, t, int(state.range(0))).density[0]);
    }
}

void cm_check_order6(benchmark::State& state) {
    auto e = ssm::CharacteristicExponent::brownian_drift(0.0);
    ssm::Eigenfunction I(e, 2.0);
    auto grid = ssm::log_grid(1e-2, 1e2, 25);
    I.eval(200.0);
    for (auto _ : state) {
        auto rep = ssm::complete_monotonicity_check(
            [&](double q) { return std::exp(-I.eval(q).log_value); }, grid, 6);
        benchmark::DoNotOptimize(rep.verdict);
    }
}

}  // namespace

BENCHMARK(gaver_stehfest)->Arg(14)->Arg(20);
BENCHMARK(cm_check_order6);
