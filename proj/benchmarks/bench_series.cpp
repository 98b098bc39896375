#include <benchmark/benchmark.h>

#include <cmath>

#include "ssm/eigenfunction.hpp"
#include "ssm/levy_exponent.hpp"
#include "ssm/special_cases.hpp"

namespace {

void eval_I_brownian(benchmark::State& state) {
    auto e = ssm::CharacteristicExponent::brownian_drift(0.0);
    ssm::Eigenfunction I(e, 2.0);
    double z = double(state.range(0));
    I.eval(z);  // warm the coefficient cache
    for (auto _ : state) {
        benchmark::DoNotOptimize(I.eval(z).value);
    }
}

void eval_I_pochhammer(benchmark::State& state) {
    auto e = ssm::CharacteristicExponent::pochhammer(1.5, 1.0, 0.0);
    ssm::Eigenfunction I(e, 1.5);
    double z = double(state.range(0));
    I.eval(z);
    for (auto _ : state) {
        benchmark::DoNotOptimize(I.eval(z).value);
    }
}

void coefficient_growth(benchmark::State& state) {
    for (auto _ : state) {
        auto e = ssm::CharacteristicExponent::stable(1.0, 1.5);
        ssm::Eigenfunction I(e, 1.5);
        benchmark::DoNotOptimize(I.log_coefficient(int(state.range(0))));
    }
}

void c_theta_product(benchmark::State& state) {
    auto e = ssm::CharacteristicExponent::brownian_drift(-0.5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ssm::c_theta(e, 2.0, ssm::CThetaMode::product).c_theta);
    }
}

void eval_N_double_double_path(benchmark::State& state) {
    auto e = ssm::CharacteristicExponent::brownian_drift(-0.5);
    auto prof = ssm::c_theta(e, 2.0, ssm::CThetaMode::product);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ssm::eval_N(prof, e, 2.0, 100.0).value);
    }
}

void bessel_oracle(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(ssm::bessel_I(0.3, 7.0));
        benchmark::DoNotOptimize(ssm::macdonald_K(0.3, 2.0));
    }
}

}  // namespace

BENCHMARK(eval_I_brownian)->Arg(1)->Arg(100)->Arg(10000);
BENCHMARK(eval_I_pochhammer)->Arg(1)->Arg(100)->Arg(10000);
BENCHMARK(coefficient_growth)->Arg(64)->Arg(1024);
BENCHMARK(c_theta_product);
BENCHMARK(eval_N_double_double_path);
BENCHMARK(bessel_oracle);
