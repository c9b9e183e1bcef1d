// tools/bench.cc

// Copyright 2026  The dovetail authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Side-by-side timing of the production OpenMP kernels against the serial
// reference implementations, over the frame counts a 20 s snippet, a 3 min
// meeting, and a 30 min meeting would produce.

#include <cstdint>
#include <vector>

#include "benchmark/benchmark.h"
#include "dovetail/gmm.h"
#include "dovetail/rng.h"

namespace dovetail {
namespace {

constexpr int kDim = 4;
constexpr int kComponents = 4;

const std::vector<double>& Frames(int n) {
  static std::vector<double> data = [] {
    Rng rng(7);
    std::vector<double> d(180000 * kDim);
    for (double& v : d) v = rng.Normal() * 2.0 + (rng.Below(2) ? 4.0 : -4.0);
    return d;
  }();
  (void)n;
  return data;
}

GmmModel Model(int n) {
  const std::vector<double>& x = Frames(n);
  return QuantileInit(x.data(), n, kDim, kComponents,
                      VarianceFloor(x.data(), n, kDim));
}

void BM_LogDensitySerial(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  GmmModel m = Model(n);
  std::vector<double> out(static_cast<size_t>(n));
  for (auto _ : state) {
    kernels::serial::LogDensity(m, Frames(n).data(), n, out.data());
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * n);
}

void BM_LogDensityParallel(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  GmmModel m = Model(n);
  std::vector<double> out(static_cast<size_t>(n));
  for (auto _ : state) {
    kernels::LogDensity(m, Frames(n).data(), n, out.data());
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * n);
}

void BM_EmAccumulateSerial(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  GmmModel m = Model(n);
  for (auto _ : state) {
    EmStats stats = kernels::serial::EmAccumulate(m, Frames(n).data(), n);
    benchmark::DoNotOptimize(stats.loglik);
  }
  state.SetItemsProcessed(state.iterations() * n);
}

void BM_EmAccumulateParallel(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  GmmModel m = Model(n);
  for (auto _ : state) {
    EmStats stats = kernels::EmAccumulate(m, Frames(n).data(), n);
    benchmark::DoNotOptimize(stats.loglik);
  }
  state.SetItemsProcessed(state.iterations() * n);
}

void BM_SumSerial(benchmark::State& state) {
  int n = static_cast<int>(state.range(0)) * kDim;
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::serial::PlainSum(Frames(n).data(), n));
  }
  state.SetItemsProcessed(state.iterations() * n);
}

void BM_SumChunked(benchmark::State& state) {
  int n = static_cast<int>(state.range(0)) * kDim;
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::ChunkSum(Frames(n).data(), n));
  }
  state.SetItemsProcessed(state.iterations() * n);
}

BENCHMARK(BM_LogDensitySerial)->Arg(2000)->Arg(18000)->Arg(180000);
BENCHMARK(BM_LogDensityParallel)->Arg(2000)->Arg(18000)->Arg(180000);
BENCHMARK(BM_EmAccumulateSerial)->Arg(2000)->Arg(18000)->Arg(180000);
BENCHMARK(BM_EmAccumulateParallel)->Arg(2000)->Arg(18000)->Arg(180000);
BENCHMARK(BM_SumSerial)->Arg(2000)->Arg(18000)->Arg(180000);
BENCHMARK(BM_SumChunked)->Arg(2000)->Arg(18000)->Arg(180000);

}  // namespace
}  // namespace dovetail

BENCHMARK_MAIN();
