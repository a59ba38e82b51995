// OpenMP kernels against their serial references.
#include <benchmark/benchmark.h>

#include <vector>

#include "jacobi/oracle.hpp"
#include "jacobi/spectral.hpp"

using namespace jacobi;

namespace {

const CoefficientModel& model() {
    static const CoefficientModel m = CoefficientModel::power_law(0.1, 0.7, 0.05, 0.7);
    return m;
}

std::vector<double> grid(int n) {
    std::vector<double> g;
    for (int i = 0; i < n; ++i) g.push_back(-0.99 + 1.98 * i / (n - 1));
    return g;
}

SpectralOptions scan_options() {
    SpectralOptions so;
    so.jost.n_max = 100'000;
    return so;
}

void BM_WeightScan(benchmark::State& st) {
    const auto g = grid(static_cast<int>(st.range(0)));
    const auto so = scan_options();
    for (auto _ : st) benchmark::DoNotOptimize(weight_scan(model(), g, so));
}

void BM_WeightScanSerial(benchmark::State& st) {
    const auto g = grid(static_cast<int>(st.range(0)));
    const auto so = scan_options();
    for (auto _ : st) benchmark::DoNotOptimize(weight_scan_serial(model(), g, so));
}

void BM_Truncation(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(truncation_spectrum(model(), st.range(0), true));
}

void BM_TruncationSerial(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(truncation_spectrum(model(), st.range(0), false));
}

void BM_EigenSearch(benchmark::State& st) {
    const auto m = CoefficientModel::explicit_list({0.9, 0.2, 0.8}, {0.4});
    for (auto _ : st) benchmark::DoNotOptimize(find_eigenvalues(m, {}, {}, true));
}

void BM_EigenSearchSerial(benchmark::State& st) {
    const auto m = CoefficientModel::explicit_list({0.9, 0.2, 0.8}, {0.4});
    for (auto _ : st) benchmark::DoNotOptimize(find_eigenvalues(m, {}, {}, false));
}

}  // namespace

BENCHMARK(BM_WeightScan)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WeightScanSerial)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Truncation)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TruncationSerial)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EigenSearch)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EigenSearchSerial)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
