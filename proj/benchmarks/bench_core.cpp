#include <benchmark/benchmark.h>

#include <vector>

#include "faigp/benchmarks.hpp"
#include "faigp/canonical.hpp"
#include "faigp/diversity.hpp"
#include "faigp/engine.hpp"
#include "faigp/fitter.hpp"
#include "faigp/operators.hpp"
#include "faigp/prior.hpp"

namespace {
using namespace faigp;

auto Population(std::size_t count, std::size_t arity, std::uint64_t seed) -> std::vector<Program>
{
    EngineConfig const cfg;
    auto const prior = OperatorPrior::Uniform();
    FitConfig const fit;
    VariationContext const ctx { cfg, prior, fit, arity };
    Rng rng(seed);
    std::vector<Program> out;
    for (std::size_t i = 0; i < count; ++i) {
        out.push_back(GenerateRandomProgram(ctx, rng));
    }
    return out;
}

auto KeijzerData() -> Dataset { return GenerateDataset(*FindBenchmark("Keijzer-2*"), 1); }

void BM_EvaluateBatch(benchmark::State& state)
{
    auto const data = KeijzerData();
    auto const programs = Population(64, data.Arity(), 1);
    std::vector<double> out(data.Rows());
    for (auto _ : state) {
        for (auto const& p : programs) {
            EvaluateInto(p, data.View(), out);
            benchmark::DoNotOptimize(out.data());
        }
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(programs.size() * data.Rows()));
}
BENCHMARK(BM_EvaluateBatch);

void BM_Canonicalize(benchmark::State& state)
{
    auto programs = Population(256, 2, 2);
    for (auto& p : programs) {
        p.Nodes.insert(p.Nodes.end(), p.Nodes.begin(), p.Nodes.end()); // force merges
    }
    for (auto _ : state) {
        for (auto const& p : programs) {
            benchmark::DoNotOptimize(Canonicalize(p));
        }
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(programs.size()));
}
BENCHMARK(BM_Canonicalize);

void BM_PairwiseDiversity(benchmark::State& state)
{
    auto const programs = Population(static_cast<std::size_t>(state.range(0)), 2, 3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(PairwiseDiversity(programs));
    }
}
BENCHMARK(BM_PairwiseDiversity)->Arg(100)->Arg(400);

void BM_LmFit(benchmark::State& state)
{
    auto const data = KeijzerData();
    auto const programs = Population(32, data.Arity(), 4);
    FitConfig fit;
    fit.MaxCalls = static_cast<std::size_t>(state.range(0));
    Rng rng(5);
    for (auto _ : state) {
        for (auto const& p : programs) {
            benchmark::DoNotOptimize(LmFit(p, data.View(), data.Y(), fit, rng));
        }
    }
}
BENCHMARK(BM_LmFit)->Arg(3)->Arg(5);

void BM_Generations(benchmark::State& state)
{
    auto const data = KeijzerData();
    EngineConfig cfg;
    cfg.PopulationSize = 400;
    cfg.Generations = static_cast<std::size_t>(state.range(0));
    cfg.LossTarget = 0.0;
    cfg.Seed = 6;
    for (auto _ : state) {
        benchmark::DoNotOptimize(Evolve(data, OperatorPrior::Uniform(), cfg, LossKind::Chi2, RegularizerConfig {}, FitConfig {}));
    }
}
BENCHMARK(BM_Generations)->Arg(1)->Arg(5)->Unit(benchmark::kMillisecond);
} // namespace

BENCHMARK_MAIN();
