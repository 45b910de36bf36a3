#include <benchmark/benchmark.h>

#include "ssfm/characterize.hpp"
#include "ssfm/polytope.hpp"
#include "ssfm/rotations.hpp"
#include "ssfm/stability.hpp"
#include "ssfm/strongstab.hpp"

using namespace ssfm;

namespace {

// Complete lists keep the stable set nontrivial as the market grows.
Market market_for(const benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    return gen_random_market(67, n, n + 2, 2, ListDraw::Complete);
}

void BM_DeferredAcceptance(benchmark::State& state) {
    const Market m = market_for(state);
    for (auto _ : state) benchmark::DoNotOptimize(deferred_acceptance(m, Side::Firms));
}
BENCHMARK(BM_DeferredAcceptance)->Arg(4)->Arg(16)->Arg(64);

void BM_EnumerateBruteForce(benchmark::State& state) {
    const Market m = market_for(state);
    for (auto _ : state) benchmark::DoNotOptimize(enumerate_stable_bruteforce(m));
}
BENCHMARK(BM_EnumerateBruteForce)->Arg(2)->Arg(3)->Arg(4);

void BM_EnumerateRotations(benchmark::State& state) {
    const Market m = market_for(state);
    for (auto _ : state) benchmark::DoNotOptimize(enumerate_stable_via_rotations(m));
}
BENCHMARK(BM_EnumerateRotations)->Arg(2)->Arg(3)->Arg(4)->Arg(16);

FractionalMatching hull_point(const Market& m) {
    return sample_hull(m, deferred_acceptance(m, Side::Firms), 1, 1).front();
}

void BM_StrongStabilityCheck(benchmark::State& state) {
    const Market m = market_for(state);
    const FractionalMatching x = hull_point(m);
    for (auto _ : state) benchmark::DoNotOptimize(strong_stability_check(m, x));
}
BENCHMARK(BM_StrongStabilityCheck)->Arg(4)->Arg(16);

void BM_Decompose(benchmark::State& state) {
    const Market m = market_for(state);
    const FractionalMatching x = hull_point(m);
    for (auto _ : state) benchmark::DoNotOptimize(decompose(m, x));
}
BENCHMARK(BM_Decompose)->Arg(4)->Arg(16);

void BM_ExtremePointTest(benchmark::State& state) {
    const Market m = market_for(state);
    const FractionalMatching x = hull_point(m);
    for (auto _ : state) benchmark::DoNotOptimize(is_extreme_point(m, x));
}
BENCHMARK(BM_ExtremePointTest)->Arg(4)->Arg(8);

}  // namespace

BENCHMARK_MAIN();
