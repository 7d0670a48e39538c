#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "piclb/cost_field.hpp"
#include "piclb/orbh.hpp"
#include "piclb/partition.hpp"

using namespace piclb;

namespace {

CostField random_field(int gx, int gy, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<long long> p(static_cast<std::size_t>(gx) * gy);
    for (auto& v : p) v = static_cast<long long>(rng() % 100);
    CostField cf(gx, gy);
    cf.assign(std::move(p), std::vector<long long>(p.size(), 0));
    return cf;
}

}  // namespace

static void BM_FindCut(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const CostField cf = random_field(n, n, 7);
    for (auto _ : state)
        benchmark::DoNotOptimize(find_cut(cf, cf.full_rect(), CutAxis::X, 0.5));
}
BENCHMARK(BM_FindCut)->Arg(64)->Arg(256);

static void BM_Urb(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const CostField cf = random_field(n, n, 11);
    for (auto _ : state) benchmark::DoNotOptimize(tree_to_map(urb(cf, 16)).owner.size());
}
BENCHMARK(BM_Urb)->Arg(32)->Arg(128);

static void BM_UrbLimited(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const CostField before = random_field(n, n, 13);
    const CostField after = random_field(n, n, 17);
    const PartitionTree prev = urb(before, 16);
    for (auto _ : state)
        benchmark::DoNotOptimize(urb_limited(prev, after, 1).leaves().size());
}
BENCHMARK(BM_UrbLimited)->Arg(32)->Arg(128);

static void BM_DiffusionRound(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const CostField cf = random_field(n, n, 23);
    long long t = 0;
    OrbHLayout layout = orbh_init(cf, default_column_ranks(16));
    for (auto _ : state) {
        diffusion_round(layout, cf, t++, DiffusionParams{});
        benchmark::DoNotOptimize(layout.col_bounds.data());
    }
}
BENCHMARK(BM_DiffusionRound)->Arg(64)->Arg(256);

static void BM_MigrationCost(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const CostField a = random_field(n, n, 29);
    const CostField b = random_field(n, n, 31);
    const PartitionMap ma = tree_to_map(urb(a, 16));
    const PartitionMap mb = tree_to_map(urb(b, 16));
    for (auto _ : state) benchmark::DoNotOptimize(migration_cost(ma, mb, a));
}
BENCHMARK(BM_MigrationCost)->Arg(64)->Arg(256);
