// Copyright 2026-present the growset authors
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

#include "growset/ann/hnsw.hpp"
#include "growset/gain.hpp"
#include "growset/rng.hpp"

namespace {

using namespace growset;

EmbeddingVector random_unit(RngStream& rng, std::size_t dim) {
  std::vector<float> v(dim);
  for (float& x : v) {
    x = static_cast<float>(rng.gaussian());
  }
  return normalize(v);
}

ann::HnswIndex build_index(std::size_t n, std::size_t dim) {
  RngStream rng(1, "bench_build");
  ann::HnswIndex index(dim, ann::HnswParams{}, 1);
  for (std::uint64_t i = 0; i < n; ++i) {
    index.insert(random_unit(rng, dim), i);
  }
  return index;
}

void BM_Insert(benchmark::State& state) {
  const std::size_t dim = 32;
  const auto base = build_index(static_cast<std::size_t>(state.range(0)), dim);
  RngStream rng(2, "bench_insert");
  std::uint64_t ordinal = base.size();
  for (auto _ : state) {
    state.PauseTiming();
    ann::HnswIndex index = ann::HnswIndex::restore(base.snapshot());
    const EmbeddingVector v = random_unit(rng, dim);
    state.ResumeTiming();
    index.insert(v, ordinal++);
  }
}
BENCHMARK(BM_Insert)->Arg(1000)->Arg(10000);

void BM_Query(benchmark::State& state) {
  const std::size_t dim = 32;
  const auto index = build_index(static_cast<std::size_t>(state.range(0)), dim);
  RngStream rng(3, "bench_query");
  for (auto _ : state) {
    benchmark::DoNotOptimize(index.query(random_unit(rng, dim), 10));
  }
}
BENCHMARK(BM_Query)->Arg(1000)->Arg(10000)->Arg(100000);

void BM_InfoGain(benchmark::State& state) {
  RngStream rng(4, "bench_gain");
  std::vector<double> distances(4);
  for (auto _ : state) {
    for (double& d : distances) {
      d = rng.uniform01();
    }
    benchmark::DoNotOptimize(info_gain(distances, MeanMode::arithmetic));
    benchmark::DoNotOptimize(info_gain(distances, MeanMode::harmonic));
  }
}
BENCHMARK(BM_InfoGain);

}  // namespace

BENCHMARK_MAIN();
