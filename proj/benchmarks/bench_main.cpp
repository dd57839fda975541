// Copyright 2026 The infolat Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "infolat/dense.hpp"
#include "infolat/gaussian.hpp"
#include "infolat/kitaev.hpp"
#include "infolat/lattice.hpp"
#include "infolat/mps.hpp"

namespace {

void BM_DenseLattice(benchmark::State& state) {
  const int L = static_cast<int>(state.range(0));
  const auto psi = infolat::haar_random_state(L, 7);
  for (auto _ : state) {
    infolat::DenseEntropyProvider provider(psi);
    benchmark::DoNotOptimize(infolat::local_information(provider));
  }
}
BENCHMARK(BM_DenseLattice)->Arg(8)->Arg(10)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_GaussianGround(benchmark::State& state) {
  const auto r = infolat::sample_disorder(static_cast<int>(state.range(0)), 0.0, 11);
  for (auto _ : state) benchmark::DoNotOptimize(infolat::ground_covariance(r.coupling()));
}
BENCHMARK(BM_GaussianGround)->Arg(64)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_GaussianLattice(benchmark::State& state) {
  const auto r = infolat::sample_disorder(static_cast<int>(state.range(0)), static_cast<double>(state.range(1)), 11);
  const auto gs = infolat::ground_covariance(r.coupling());
  for (auto _ : state) {
    infolat::GaussianEntropyProvider provider(gs.covariance);
    benchmark::DoNotOptimize(infolat::local_information(provider));
  }
}
BENCHMARK(BM_GaussianLattice)->Args({100, 0})->Args({100, 1})->Unit(benchmark::kMillisecond);

void BM_MpsLattice(benchmark::State& state) {
  const auto mps = infolat::mps_from_dense(infolat::haar_random_state(static_cast<int>(state.range(0)), 3), 1 << 12, 0.0);
  const int capacity = static_cast<int>(state.range(1));
  for (auto _ : state) {
    infolat::MpsEntropyProvider provider(mps, capacity);
    benchmark::DoNotOptimize(infolat::local_information(provider));
  }
}
BENCHMARK(BM_MpsLattice)->Args({10, 0})->Args({10, 8})->Args({12, 8})->Unit(benchmark::kMillisecond);

void BM_MidspectrumSector(benchmark::State& state) {
  const auto r = infolat::sample_disorder(static_cast<int>(state.range(0)), 0.0, 5, 0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        infolat::parity_sector_eigensystem(r, infolat::Parity::Even, infolat::Target::ClosestToZero));
  }
}
BENCHMARK(BM_MidspectrumSector)->Arg(9)->Arg(11)->Arg(13)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
