#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "folkseg/boundary_eval.hpp"
#include "folkseg/features.hpp"
#include "folkseg/manova.hpp"
#include "folkseg/rng.hpp"
#include "folkseg/segmenter.hpp"
#include "folkseg/special_functions.hpp"
#include "folkseg/synth.hpp"

namespace {

using namespace folkseg;

void BM_MatchBoundaries(benchmark::State& state) {
  Rng rng(1);
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> ref(n), pred(n);
  for (std::size_t i = 0; i < n; ++i) {
    ref[i] = 2.0 * static_cast<double>(i + 1);
    pred[i] = ref[i] + rng.normal(0.0, 0.05);
  }
  for (auto _ : state) benchmark::DoNotOptimize(match_boundaries(ref, pred, 0.1));
  state.SetItemsProcessed(state.iterations() * static_cast<long long>(n));
}
BENCHMARK(BM_MatchBoundaries)->Arg(100)->Arg(10000);

void BM_DurationEntropy(benchmark::State& state) {
  Rng rng(2);
  std::vector<double> d(static_cast<std::size_t>(state.range(0)));
  for (auto& x : d) x = std::exp2(rng.normal(1.5, 0.5));
  for (auto _ : state) benchmark::DoNotOptimize(duration_entropy(d));
}
BENCHMARK(BM_DurationEntropy)->Arg(30)->Arg(3000);

void BM_ExtractFeatures(benchmark::State& state) {
  const auto corpus = generate_corpus(default_profiles(), 20, 3);
  for (auto _ : state) benchmark::DoNotOptimize(extract_features(corpus));
}
BENCHMARK(BM_ExtractFeatures);

void BM_Manova(benchmark::State& state) {
  const auto table = extract_features(generate_corpus(default_profiles(), 20, 4));
  const auto obs = observations_from_features(table);
  const ManovaOptions opts{state.range(0) != 0, 0};
  for (auto _ : state) benchmark::DoNotOptimize(manova(obs, opts));
}
BENCHMARK(BM_Manova)->Arg(0)->Arg(1);

void BM_FSurvival(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(f_survival(23.52, 14.0, 1532.0));
}
BENCHMARK(BM_FSurvival);

void BM_SegmentEnergy(benchmark::State& state) {
  AudioBuffer audio{16000.0, {}};
  for (int k = 0; k < 30; ++k) {
    for (int i = 0; i < 16000; ++i) {
      audio.samples.push_back(static_cast<float>(0.5 * std::sin(2.0 * std::numbers::pi * 220.0 * i / 16000.0)));
    }
    audio.samples.insert(audio.samples.end(), 6400, 0.0f);
  }
  for (auto _ : state) benchmark::DoNotOptimize(segment_energy(audio));
}
BENCHMARK(BM_SegmentEnergy);

}  // namespace
BENCHMARK_MAIN();
