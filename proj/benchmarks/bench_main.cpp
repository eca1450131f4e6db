#include <benchmark/benchmark.h>

#include "magan/autodiff/ops.hpp"
#include "magan/exact/discrete.hpp"
#include "magan/exact/simulate.hpp"
#include "magan/gan/trainer.hpp"
#include "magan/io/dataset.hpp"

using namespace magan;

namespace {

ad::Tensor random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    io::Rng rng(seed);
    ad::Tensor t({rows, cols});
    rng.fill_normal(t.data());
    return t;
}

void BM_MatmulForwardBackward(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    ad::Parameter w("w", random_matrix(n, n, 1));
    const ad::Tensor x = random_matrix(64, n, 2);
    for (auto _ : state) {
        w.zero_grad();
        ad::Graph g;
        g.backward(ad::mean(ad::matmul(g.constant(x), g.parameter(w))));
        benchmark::DoNotOptimize(w.grad.data().data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(64 * n * n));
}
BENCHMARK(BM_MatmulForwardBackward)->Arg(16)->Arg(64)->Arg(128);

void BM_TrainEpoch(benchmark::State& state) {
    gan::TrainConfig config;
    config.train_size = 1024;
    const io::Dataset data = io::make_dataset(config.dataset, config.train_size, config.sigma, 1);
    auto setup = gan::make_run_setup(config);
    gan::MarginState ms;
    ms.margin = 0.5;
    std::size_t epoch = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(gan::train_epoch(setup.model, ms, data, config, setup.rng, ++epoch));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(config.train_size));
}
BENCHMARK(BM_TrainEpoch)->Unit(benchmark::kMillisecond);

void BM_SimplexProjection(benchmark::State& state) {
    io::Rng rng(3);
    std::vector<double> v(static_cast<std::size_t>(state.range(0)));
    for (auto& x : v) x = rng.normal();
    for (auto _ : state) benchmark::DoNotOptimize(exact::project_to_simplex(v));
}
BENCHMARK(BM_SimplexProjection)->Arg(16)->Arg(1024);

void BM_Simulate(benchmark::State& state) {
    io::Rng rng(4);
    const exact::DiscreteDistPair start = exact::random_pair(rng, 16, 1.0);
    exact::SimOptions opt;
    opt.eta = 1e-3;
    opt.max_steps = 10000;
    opt.record_steps = false;
    for (auto _ : state) {
        benchmark::DoNotOptimize(exact::simulate(exact::SimMode::ebgan, start, opt));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(opt.max_steps));
}
BENCHMARK(BM_Simulate)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
