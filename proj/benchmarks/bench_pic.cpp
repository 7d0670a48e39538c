#include <benchmark/benchmark.h>

#include "piclb/pic.hpp"

using namespace piclb;

namespace {

PicState make_state(int nodes, long long particles) {
    PicState state;
    state.dom = {1.0, 1.0};
    state.fg = {nodes, nodes};
    state.dt = 0.1 * (1.0 / nodes) / 0.2;
    state.solver_tol = 1e-6;
    state.solver_max_iter = 20 * nodes;
    TwoStreamConfig cfg;
    cfg.n_particles = particles;
    cfg.v0 = 0.2;
    cfg.charge = -12.566 / std::sqrt(static_cast<double>(particles));
    cfg.eps = 0.01;
    cfg.k_mode = 2;
    cfg.seed = 42;
    state.particles = init_two_stream(cfg, state.dom);
    return state;
}

}  // namespace

static void BM_DepositCharge(benchmark::State& state) {
    const PicState s = make_state(64, state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(deposit_charge(s.particles, s.fg, s.dom).sum());
}
BENCHMARK(BM_DepositCharge)->Arg(10000)->Arg(100000);

static void BM_FieldSolve(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    PicState s = make_state(n, 20000);
    const ChargeGrid rho = deposit_charge(s.particles, s.fg, s.dom);
    for (auto _ : state) {
        const auto r = solve_fields(rho, s.fg, s.dom, 1e-6, 20 * n);
        benchmark::DoNotOptimize(r.iterations);
    }
}
BENCHMARK(BM_FieldSolve)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_PicStep(benchmark::State& state) {
    PicState s = make_state(64, state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(pic_step(s).field_energy);
}
BENCHMARK(BM_PicStep)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);
