#include <benchmark/benchmark.h>

#include <numeric>

#include "hretan/classifier.hpp"
#include "hretan/synthgen.hpp"

using namespace hretan;

namespace {

struct Fixture {
    Fixture() {
        SynthConfig cfg;
        cfg.n_features = 120;
        cfg.n_instances = 300;
        cfg.imbalance = 0.4;
        cfg.dependence_strength = 0.8;
        cfg.seed = 11;
        auto data = generate(cfg);
        closure = build_closure(data.dag);
        std::vector<std::size_t> tr(250), te(50);
        std::iota(tr.begin(), tr.end(), std::size_t{0});
        std::iota(te.begin(), te.end(), std::size_t{250});
        train = data.dataset.subset(tr);
        test = data.dataset.subset(te);
    }
    ClosureTable closure;
    Dataset train;
    Dataset test;
};

const Fixture& fixture() {
    static const Fixture f;
    return f;
}

void BM_ClassifySerial(benchmark::State& state) {
    const auto& f = fixture();
    LazyClassifier model(f.train, static_cast<AlgorithmKind>(state.range(0)), f.closure);
    for (auto _ : state) benchmark::DoNotOptimize(classify_testset_serial(model, f.test));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.test.size()));
}

void BM_ClassifyParallel(benchmark::State& state) {
    const auto& f = fixture();
    LazyClassifier model(f.train, static_cast<AlgorithmKind>(state.range(0)), f.closure);
    const int threads = static_cast<int>(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(classify_testset(model, f.test, threads));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.test.size()));
}

} // namespace

// range(0): 0 tan, 1 hre-tan, 2 hre-tan-mix, 3 hre-tan-plus
BENCHMARK(BM_ClassifySerial)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ClassifyParallel)->ArgsProduct({{0, 1, 2, 3}, {1, 2, 4}})->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
