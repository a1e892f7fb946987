#include "robustiso/approx.hpp"
#include "robustiso/graph.hpp"
#include "robustiso/instances.hpp"
#include "robustiso/set_system.hpp"
#include "robustiso/wl.hpp"

#include <benchmark/benchmark.h>

using namespace robustiso;

namespace {

void BM_EditDistanceBruteforce(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Graph g = gen_random_graph(n, 0.5, 1), h = gen_random_graph(n, 0.5, 2);
    for (auto _ : state) benchmark::DoNotOptimize(edit_distance_bruteforce(g, h).cost);
}
BENCHMARK(BM_EditDistanceBruteforce)->DenseRange(5, 8)->Unit(benchmark::kMillisecond);

void BM_AlphaLp(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const QapInstance q = ged_to_qap(gen_random_graph(n, 0.5, 3), gen_random_graph(n, 0.5, 4));
    const LinearProgram lp = build_alpha_lp(q, PartialInjection({{0, 1}, {2, 0}}), Rational(1));
    LpOptions options;
    options.arithmetic = state.range(1) ? LpArithmetic::exact : LpArithmetic::floating;
    for (auto _ : state) benchmark::DoNotOptimize(solve_lp(lp, options).objective);
}
BENCHMARK(BM_AlphaLp)->ArgsProduct({{4, 6, 8}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_ApproximateGed(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Graph g = gen_random_graph(n, 0.5, 5), h = gen_random_graph(n, 0.5, 6);
    ApproxOptions options;
    options.m = static_cast<std::size_t>(state.range(1));
    options.seed = 7;
    for (auto _ : state) benchmark::DoNotOptimize(approximate_ged(g, h, Rational(1), options).cost);
}
BENCHMARK(BM_ApproximateGed)->Args({5, 1})->Args({5, 2})->Args({6, 2})->Unit(benchmark::kMillisecond);

void BM_VcDimension(benchmark::State& state) {
    const Graph g = gen_random_graph(static_cast<std::size_t>(state.range(0)), 0.5, 8);
    const SetSystem s = mixed_system(g);
    for (auto _ : state) benchmark::DoNotOptimize(vc_dimension_exact(s));
}
BENCHMARK(BM_VcDimension)->RangeMultiplier(2)->Range(8, 64)->Unit(benchmark::kMillisecond);

void BM_WeakVc(benchmark::State& state) {
    const QapInstance q = gen_lemma36_qap(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(weak_vc_test(q, 1));
}
BENCHMARK(BM_WeakVc)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_ColourRefinement(benchmark::State& state) {
    const Graph g = gen_random_graph(static_cast<std::size_t>(state.range(0)), 0.1, 9);
    for (auto _ : state) benchmark::DoNotOptimize(colour_refinement(g).class_count());
}
BENCHMARK(BM_ColourRefinement)->RangeMultiplier(4)->Range(64, 4096);

void BM_KWl(benchmark::State& state) {
    const auto bundle = gen_cfi_pair("k4");
    const auto k = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(wl_distinguishes(bundle.g, bundle.h, k));
}
BENCHMARK(BM_KWl)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_FindIsomorphismCfi(benchmark::State& state) {
    const auto bundle = gen_cfi_pair(cfi_base_names()[static_cast<std::size_t>(state.range(0))]);
    for (auto _ : state) benchmark::DoNotOptimize(find_isomorphism(bundle.g, bundle.h).has_value());
}
BENCHMARK(BM_FindIsomorphismCfi)->DenseRange(0, 4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
