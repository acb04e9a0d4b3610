#include <benchmark/benchmark.h>

#include <rigidpts/detmethod.hpp>
#include <rigidpts/examples.hpp>
#include <rigidpts/kernels.hpp>

using namespace rigidpts;

namespace
{

const tadic F2(2);
const padic Q5(5);

// Arg 0 selects the serial reference, otherwise the worker count.
void BM_f2_sweep(benchmark::State &st)
{
    const auto pts = all_pairs(f2_values(2));
    const auto workers = static_cast<int>(st.range(0));
    for (auto _ : st) {
        auto s = workers == 0 ? f2_sweep_serial(pts, 18) : f2_sweep_parallel(pts, 18, workers);
        benchmark::DoNotOptimize(s);
    }
}
BENCHMARK(BM_f2_sweep)->Arg(0)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_padic_sweep(benchmark::State &st)
{
    const auto pts = all_pairs(small_values(5, 3));
    const auto workers = static_cast<int>(st.range(0));
    for (auto _ : st) {
        auto s = workers == 0 ? padic_sweep_serial(pts, 5, 11) : padic_sweep_parallel(pts, 5, 11, workers);
        benchmark::DoNotOptimize(s);
    }
}
BENCHMARK(BM_padic_sweep)->Arg(0)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_membership(benchmark::State &st)
{
    enum_options opt;
    opt.workers = static_cast<int>(st.range(0));
    const auto alg = parabola(F2);
    for (auto _ : st) {
        auto r = points_on_set(alg, 3L, opt);
        benchmark::DoNotOptimize(r);
    }
}
BENCHMARK(BM_membership)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_extraction(benchmark::State &st)
{
    const auto pts = points_on_set(parabola(F2), 4L).points;
    cover_params cp;
    cp.workers = static_cast<int>(st.range(0));
    for (auto _ : st) {
        auto c = cover_by_hypersurfaces(F2, pts, 4L, cp);
        benchmark::DoNotOptimize(c);
    }
}
BENCHMARK(BM_extraction)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_membership_padic(benchmark::State &st)
{
    enum_options opt;
    opt.workers = static_cast<int>(st.range(0));
    const auto alg = cubic_curve(Q5);
    for (auto _ : st) {
        auto r = points_on_set(alg, mpz_class(6), opt);
        benchmark::DoNotOptimize(r);
    }
}
BENCHMARK(BM_membership_padic)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
