#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "rorlicz/closure_diagnostics.hpp"
#include "rorlicz/kernels.hpp"
#include "rorlicz/norm_engine.hpp"

using namespace rorlicz;

namespace {

struct Data {
    std::vector<double> w, x, logw, logx;
};

const Data& gaussian_data() {
    static const Data d = [] {
        Data out;
        const auto g = CountableModel::gaussian(1e-3, {20.0}, {1});
        const auto m = g.level(0);
        out.w = m.prior(0).masses;
        for (double v : g.values()) out.x.push_back(std::abs(v));
        for (std::size_t i = 0; i < out.w.size(); ++i) {
            out.logw.push_back(std::log(out.w[i]));
            out.logx.push_back(std::log(out.x[i]));
        }
        return out;
    }();
    return d;
}

Exec exec_of(const benchmark::State& s) { return s.range(0) == 0 ? Exec::Serial : Exec::Parallel; }

void BM_PhiExpectation(benchmark::State& state) {
    const auto& d = gaussian_data();
    const auto phi = OrliczFunction::exponential(0.5);
    for (auto _ : state) benchmark::DoNotOptimize(phi_expectation(phi, d.w, d.x, 2.0, exec_of(state)));
}

void BM_LogPowerMoment(benchmark::State& state) {
    const auto& d = gaussian_data();
    for (auto _ : state) benchmark::DoNotOptimize(log_power_moment(d.logw, d.logx, 7.0, exec_of(state)));
}

void BM_PowerMoments(benchmark::State& state) {
    const auto& d = gaussian_data();
    for (auto _ : state) benchmark::DoNotOptimize(power_moments(d.w, d.x, 20, exec_of(state)));
}

void BM_LadderNorm(benchmark::State& state) {
    const auto ladder = CountableModel::gaussian(1e-3, {20.0}, {50});
    const auto m = ladder.level(0);
    const auto fam = FamilySpec::power_ladder().resolve(m);
    const auto x = ladder.identity(0);
    NormOptions o;
    o.exec = exec_of(state);
    for (auto _ : state) benchmark::DoNotOptimize(luxemburg_norm(m, x, fam, o).value);
}

} // namespace

// Argument 0 runs the serial reference, 1 the OpenMP kernel.
BENCHMARK(BM_PhiExpectation)->Arg(0)->Arg(1);
BENCHMARK(BM_LogPowerMoment)->Arg(0)->Arg(1);
BENCHMARK(BM_PowerMoments)->Arg(0)->Arg(1);
BENCHMARK(BM_LadderNorm)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
