// Serial reference kernels against their OpenMP counterparts.

#include "qjp/kernels.hpp"
#include "qjp/lattice.hpp"
#include "qjp/random.hpp"

#include <benchmark/benchmark.h>

using namespace qjp;
using namespace qjp::kernels;

namespace {

const BlochVector kRho{0.2, -0.1, 0.4};
const Indicator kF{Indicator::Kind::halfspace, {0.0, 0.0, 1.0}};
const Indicator kG{Indicator::Kind::halfspace, {0.8660254037844386, 0.0, 0.5}};

void BM_SampleHvSerial(benchmark::State &state) {
    const auto n = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(serial::sample_hv(kRho, kF, kG, n, 1));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SampleHvOmp(benchmark::State &state) {
    const auto n = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(omp::sample_hv(kRho, kF, kG, n, 1));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_GridMinSerial(benchmark::State &state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(serial::sphere_grid_min(0.5, {0.3, 0.4, 0.5}, n));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_GridMinOmp(benchmark::State &state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(omp::sphere_grid_min(0.5, {0.3, 0.4, 0.5}, n));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

// A representative sweep body: one random pair and both meet methods.
double meet_gap(std::size_t i) {
    Rng rng = make_rng(11, i);
    const Projector p = sample_projector(4, 2, rng);
    const Projector q = sample_projector(4, 2, rng);
    return max_abs_diff(meet(p, q, MeetMethod::spectral), meet(p, q, MeetMethod::iterated));
}

void BM_SweepSerial(benchmark::State &state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(serial::map_indexed(n, meet_gap));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SweepOmp(benchmark::State &state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(omp::map_indexed(n, meet_gap));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

} // namespace

BENCHMARK(BM_SampleHvSerial)->Arg(1 << 16)->Arg(1 << 20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SampleHvOmp)->Arg(1 << 16)->Arg(1 << 20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GridMinSerial)->Arg(100'000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GridMinOmp)->Arg(100'000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepSerial)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepOmp)->Arg(256)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
