// Microbenchmarks for the hot paths: exact index queries at the reference
// scale (30000 entries, 64 dims), featurizer encoding, and the per-step
// posterior update.

#include <cstdint>
#include <vector>

#include <benchmark/benchmark.h>

#include "boa/adaptation.hpp"
#include "boa/distributions.hpp"
#include "boa/featurizer.hpp"
#include "boa/gridworld.hpp"
#include "boa/latent_index.hpp"
#include "boa/rng.hpp"

namespace {

boa::LatentIndex reference_index(std::size_t entries, int dim) {
    boa::FeaturizerSpec spec;
    spec.seed = 11;
    spec.output_dim = dim;
    spec.input_dim = 4 * (7 * 7 * 6 + 1);
    boa::LatentIndex index(dim, 6, spec);
    boa::Rng rng(99);
    std::vector<float> z(static_cast<std::size_t>(dim));
    for (std::size_t i = 0; i < entries; ++i) {
        for (float& v : z) v = static_cast<float>(rng.normal());
        index.add(z, {static_cast<std::uint32_t>(i / 100), static_cast<std::uint32_t>(i % 100),
                      static_cast<std::uint32_t>(i % 6)});
    }
    return index;
}

void BM_IndexQuery(benchmark::State& state) {
    const int dim = 64;
    const boa::LatentIndex index = reference_index(30000, dim);
    boa::Rng rng(7);
    std::vector<double> probe(static_cast<std::size_t>(dim));
    for (double& v : probe) v = rng.normal();
    const int k = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(index.query(probe, k));
    }
}
BENCHMARK(BM_IndexQuery)->Arg(1)->Arg(5)->Arg(20)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_FeaturizerEncode(benchmark::State& state) {
    const boa::EnvSpec env = boa::EnvSpec::defaults(boa::Task::one_room, 3);
    boa::Env world(env);
    const boa::FeaturizerSpec spec =
        boa::FeaturizerSpec::for_window(11, 64, env.obs_width());
    const boa::Featurizer featurizer(spec);
    boa::FrameStack stack;
    stack.push(world.observe());
    for (auto _ : state) {
        benchmark::DoNotOptimize(featurizer.encode(stack));
    }
}
BENCHMARK(BM_FeaturizerEncode);

void BM_PosteriorUpdate(benchmark::State& state) {
    const boa::ActionDistribution prior(std::vector<double>{0.2, 0.3, 0.5});
    boa::CountVector counts(std::vector<std::uint32_t>{3, 1, 1});
    for (auto _ : state) {
        benchmark::DoNotOptimize(boa::posterior_concentration(prior, counts, 5));
    }
}
BENCHMARK(BM_PosteriorUpdate);

}  // namespace

BENCHMARK_MAIN();
