#include <benchmark/benchmark.h>

#include "ssm/montecarlo.hpp"

namespace {

ssm::PathConfig brownian_cfg() {
    ssm::PathConfig cfg{ssm::CharacteristicExponent::brownian_drift(0.5)};
    cfg.alpha = 2.0;
    cfg.dt = 1e-3;
    cfg.seed = 9;
    return cfg;
}

void brownian_path_steps(benchmark::State& state) {
    ssm::PathSimulator sim(brownian_cfg());
    std::uint64_t idx = 0;
    for (auto _ : state) {
        auto p = sim.simulate(0.0, idx++, 1.0);
        benchmark::DoNotOptimize(p.sigma.back());
    }
    state.SetItemsProcessed(state.iterations() * 1000);  // ~1000 segments/path
}

void pochhammer_path_steps(benchmark::State& state) {
    ssm::PathConfig cfg{ssm::CharacteristicExponent::pochhammer(1.5, 1.0, 0.0)};
    cfg.alpha = 1.5;
    cfg.dt = 1e-3;
    cfg.eps = 0.02;
    cfg.seed = 9;
    ssm::PathSimulator sim(cfg);
    std::uint64_t idx = 0;
    for (auto _ : state) {
        auto p = sim.simulate(0.0, idx++, 1.0);
        benchmark::DoNotOptimize(p.sigma.back());
    }
    state.SetItemsProcessed(state.iterations() * 1000);
}

void fpt_estimate_small(benchmark::State& state) {
    auto cfg = brownian_cfg();
    cfg.paths = 512;
    for (auto _ : state) {
        benchmark::DoNotOptimize(ssm::estimate_fpt_laplace(cfg, 1.0, 1.0, 2.0).estimate);
        cfg.seed += 1;
    }
    state.SetItemsProcessed(state.iterations() * 512);
}

void rng_normals(benchmark::State& state) {
    ssm::CounterRng rng(1, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(rng.normal());
    }
}

}  // namespace

BENCHMARK(brownian_path_steps);
BENCHMARK(pochhammer_path_steps);
BENCHMARK(fpt_estimate_small);
BENCHMARK(rng_normals);
