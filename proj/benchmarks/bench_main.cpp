#include <benchmark/benchmark.h>

#include "bvlab/bv.hpp"
#include "bvlab/corpus.hpp"
#include "bvlab/counterexample.hpp"
#include "bvlab/group.hpp"
#include "bvlab/profiles.hpp"
#include "bvlab/radial.hpp"
#include "bvlab/rearrange.hpp"

namespace {

void BM_LorentzNorm(benchmark::State& state) {
    std::vector<bvlab::Chunk> pieces;
    bvlab::CorpusRng rng(1);
    for (int i = 0; i < state.range(0); ++i) pieces.push_back({rng.uniform(0.0, 8.0), rng.uniform(0.0, 4.0)});
    const auto u = bvlab::StepFunction::from_pairs(pieces);
    const auto idx = bvlab::LorentzIndex::make(2.0, 1.5);
    for (auto _ : state) benchmark::DoNotOptimize(bvlab::lorentz_norm(u, idx));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LorentzNorm)->Range(8, 1 << 14);

void BM_Rearrangement(benchmark::State& state) {
    const auto u = bvlab::fixture_bump(1, static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(bvlab::decreasing_rearrangement(u));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(u.cell_count()));
}
BENCHMARK(BM_Rearrangement)->DenseRange(6, 10, 2);

void BM_TotalVariation2D(benchmark::State& state) {
    const auto u = bvlab::fixture_bump(1, static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(bvlab::total_variation(u));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(u.cell_count()));
}
BENCHMARK(BM_TotalVariation2D)->DenseRange(6, 10, 2);

void BM_GroupAction(benchmark::State& state) {
    const auto u = bvlab::fixture_bump(2, static_cast<int>(state.range(0)));
    const auto g = bvlab::GroupElement::lattice(2, 3, {5, -2, 0});
    for (auto _ : state) benchmark::DoNotOptimize(bvlab::act(g, u));
}
BENCHMARK(BM_GroupAction)->DenseRange(6, 10, 2);

void BM_Counterexample(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(bvlab::run_counterexample(2, static_cast<int>(state.range(0)), {1.0, 1.5, 2.0}));
    }
}
BENCHMARK(BM_Counterexample)->Arg(12)->Arg(48);

void BM_ProbeStaircase(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto elements = bvlab::probe_elements(2, n);
    for (auto _ : state) benchmark::DoNotOptimize(bvlab::dvanishing_probe(2, n, elements));
}
BENCHMARK(BM_ProbeStaircase)->Arg(4)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_ProfileExtraction(benchmark::State& state) {
    const auto seq = bvlab::two_profile_fixture(static_cast<int>(state.range(0)), 8);
    for (auto _ : state) benchmark::DoNotOptimize(bvlab::extract_profiles(seq));
}
BENCHMARK(BM_ProfileExtraction)->Arg(5)->Arg(6)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
