#include <benchmark/benchmark.h>

#include <vector>

#include "ictomo/circuit.hpp"
#include "ictomo/config.hpp"
#include "ictomo/detection.hpp"
#include "ictomo/reconstruct.hpp"
#include "ictomo/system_matrix.hpp"

using namespace ictomo;

namespace {

const config::BenchConfig& cfg() {
    static const auto c = config::reference_config();
    return c;
}

const forward::SystemMatrix& matrix() {
    static const auto a = forward::build_system_matrix(cfg().geometry);
    return a;
}

}  // namespace

static void BM_GenerateCircuit(benchmark::State& state) {
    auto params = cfg().circuit;
    for (auto _ : state) {
        ++params.seed;
        benchmark::DoNotOptimize(circuit::generate_circuit(params));
    }
}
BENCHMARK(BM_GenerateCircuit);

static void BM_BuildSystemMatrix(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(forward::build_system_matrix(cfg().geometry));
    state.counters["nnz"] = static_cast<double>(matrix().nnz());
}
BENCHMARK(BM_BuildSystemMatrix)->Unit(benchmark::kMillisecond);

static void BM_Apply(benchmark::State& state) {
    const auto& a = matrix();
    std::vector<double> x(a.cols(), 0.5);
    std::vector<double> y(a.rows());
    for (auto _ : state) {
        a.apply(x, y);
        benchmark::DoNotOptimize(y.data());
    }
}
BENCHMARK(BM_Apply);

static void BM_ApplyTranspose(benchmark::State& state) {
    const auto& a = matrix();
    std::vector<double> y(a.rows(), 1.0);
    std::vector<double> x(a.cols());
    for (auto _ : state) {
        a.apply_transpose(y, x);
        benchmark::DoNotOptimize(x.data());
    }
}
BENCHMARK(BM_ApplyTranspose);

static void BM_ReconstructML(benchmark::State& state) {
    const auto& a = matrix();
    auto params = cfg().circuit;
    params.seed = 7;
    const auto truth = circuit::generate_circuit(params);
    const auto spectrum = cfg().spectrum.resolve(5000.0);
    const auto m = forward::simulate(cfg().geometry, a, truth, spectrum, 11);
    recon::SolverConfig solver;
    solver.max_iterations = static_cast<int>(state.range(0));
    solver.relative_tolerance = 1e-300;
    for (auto _ : state) {
        benchmark::DoNotOptimize(recon::reconstruct_ml(m, a, spectrum, cfg().geometry.dims, solver));
    }
}
BENCHMARK(BM_ReconstructML)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
