// Copyright 2026 The Subag Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <vector>

#include "subag/anova.hpp"
#include "subag/bench.hpp"
#include "subag/cgas.hpp"
#include "subag/combinatorics.hpp"
#include "subag/envelope.hpp"
#include "subag/learners.hpp"
#include "subag/subag_engine.hpp"

namespace {

using namespace subag;

void BM_AttenuationProfile(benchmark::State& state) {
  const auto n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(comb::attenuation_profile(n, n / 2));
}
BENCHMARK(BM_AttenuationProfile)->Arg(100)->Arg(10000);

void BM_ExtendedBinomial(benchmark::State& state) {
  double x = 50.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(comb::extended_binomial(x, 8));
    x += 1e-9;
  }
}
BENCHMARK(BM_ExtendedBinomial);

void BM_HoeffdingSpectrum(benchmark::State& state) {
  const auto k = static_cast<int>(state.range(0));
  const DiscreteDistribution d({Atom::scalar(-1.0), Atom::scalar(0.0), Atom::scalar(0.5), Atom::scalar(2.0)},
                               {0.1, 0.2, 0.3, 0.4});
  const auto h = kernels::random_symmetric(k, 1);
  for (auto _ : state) benchmark::DoNotOptimize(anova::hoeffding_spectrum(h, d));
}
BENCHMARK(BM_HoeffdingSpectrum)->DenseRange(2, 6, 2);

void BM_ExactSubag(benchmark::State& state) {
  const auto n = static_cast<int>(state.range(0));
  std::vector<Atom> data;
  for (int i = 0; i < n; ++i) data.push_back(Atom::scalar(0.37 * i - 2.0));
  const auto h = kernels::pairwise_max(4);
  const SubagPlan plan{n, 4, SubagMode::kExact, 0, 0};
  for (auto _ : state) benchmark::DoNotOptimize(subag_predict(plan, h, data));
}
BENCHMARK(BM_ExactSubag)->Arg(12)->Arg(24);

void BM_OptimalAlpha(benchmark::State& state) {
  envelope::EnvelopeParams p;
  p.B0 = 1.0;
  p.n = 1000;
  p.M = 4;
  p.spectrum = {1e-4, 1e-5, 1e-5, 1e-3};
  for (auto _ : state) benchmark::DoNotOptimize(envelope::optimal_alpha(p));
}
BENCHMARK(BM_OptimalAlpha);

void BM_FitTree(benchmark::State& state) {
  const auto data = bench::make_friedman1(static_cast<std::size_t>(state.range(0)), 1.0, 1);
  const TreeConfig cfg{};
  for (auto _ : state) benchmark::DoNotOptimize(fit_tree(cfg, data));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FitTree)->Arg(500)->Arg(2000);

void BM_TrainEnsemble(benchmark::State& state) {
  const auto data = bench::make_friedman1(1000, 1.0, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        cgas::train_ensemble(TreeConfig{}, data, 0.3, 30, cgas::Sampling::kWithoutReplacement, 3));
  }
}
BENCHMARK(BM_TrainEnsemble)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
