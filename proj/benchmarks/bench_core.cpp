// Copyright 2026 The wavica Authors
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

#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "wavica/optimizer.hpp"
#include "wavica/preprocessing.hpp"
#include "wavica/projection.hpp"
#include "wavica/sources.hpp"
#include "wavica/wavelet.hpp"

namespace {

wavica::Sample uniform_sample(int d, std::size_t n) {
  const std::vector<wavica::Density> dens{
      wavica::Density::make(wavica::DensityKind::uniform)};
  const Eigen::MatrixXd raw = wavica::sample_sources(dens, d, n, 1);
  return wavica::to_unit_cube(raw);
}

void BM_PhiTable(benchmark::State& state) {
  const auto spec = wavica::make_filter(static_cast<int>(state.range(0)));
  const int precision = static_cast<int>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(wavica::build_phi_table(spec, precision));
  }
}
BENCHMARK(BM_PhiTable)->Args({2, 10})->Args({4, 10})->Args({2, 16});

void BM_Contrast(benchmark::State& state) {
  const int genus = static_cast<int>(state.range(0));
  const int j = static_cast<int>(state.range(1));
  const auto n = static_cast<std::size_t>(state.range(2));
  const auto table = wavica::build_phi_table(wavica::make_filter(genus), 10);
  const wavica::Sample sample = uniform_sample(2, n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(wavica::contrast_of(sample, table, j));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_Contrast)
    ->Args({1, 4, 10000})
    ->Args({2, 3, 10000})
    ->Args({2, 6, 10000})
    ->Args({4, 3, 10000})
    ->Unit(benchmark::kMillisecond);

void BM_Objective(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const std::vector<wavica::Density> dens{
      wavica::Density::make(wavica::DensityKind::uniform)};
  const Eigen::MatrixXd raw = wavica::sample_sources(dens, d, 10000, 1);
  auto table = std::make_shared<const wavica::PhiTable>(
      wavica::build_phi_table(wavica::make_filter(2), 10));
  const wavica::ContrastObjective objective(wavica::whiten(raw).whitened, table, 3);
  const Eigen::MatrixXd w = Eigen::MatrixXd::Identity(d, d);
  for (auto _ : state) {
    benchmark::DoNotOptimize(objective(w));
  }
}
BENCHMARK(BM_Objective)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
