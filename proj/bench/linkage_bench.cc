// Copyright 2026 The PHT Link Authors
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

// Parallel kernels against their serial references. Thread count comes from
// OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "pht/kernels.h"

namespace {

using pht::PseudonymVector;
using pht::QuasiIdentifierSet;

std::vector<QuasiIdentifierSet> MakeQids(std::size_t n) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> zip(1000, 9999), house(1, 400), day(1, 28), month(1, 12),
      year(1930, 1990), gender(0, 2);
  std::vector<QuasiIdentifierSet> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    char dob[11];
    std::snprintf(dob, sizeof dob, "%04d-%02d-%02d", year(rng), month(rng), day(rng));
    out.push_back({std::to_string(zip(rng)) + "AB", std::to_string(house(rng)),
                   static_cast<pht::Gender>(gender(rng)), dob});
  }
  return out;
}

template <auto Kernel>
void BM_Pseudonymize(benchmark::State& state) {
  auto qids = MakeQids(static_cast<std::size_t>(state.range(0)));
  pht::Salt salt = pht::GenerateSalt("bench");
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(qids, salt));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

struct Sides {
  std::vector<PseudonymVector> a, b;
  std::vector<const PseudonymVector*> pa, pb;
};

Sides MakeSides(std::size_t n) {
  pht::Salt salt = pht::GenerateSalt("bench");
  auto qids = MakeQids(n + n / 10);
  Sides s;
  s.a = pht::kernels::PseudonymizeBatch(std::span(qids).first(n), salt);
  s.b = pht::kernels::PseudonymizeBatch(std::span(qids).last(n / 10 + n / 10), salt);
  for (auto& v : s.a) s.pa.push_back(&v);
  for (auto& v : s.b) s.pb.push_back(&v);
  return s;
}

template <auto Kernel>
void BM_Score(benchmark::State& state) {
  Sides s = MakeSides(static_cast<std::size_t>(state.range(0)));
  pht::kernels::Candidates all;
  auto weights = pht::WeightTable::From({0.95, 0.95, 0.98, 0.97}, {0.01, 0.05, 0.4, 0.001});
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(s.pa, s.pb, all, weights, 8.0, 0.0));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(s.pa.size() * s.pb.size()));
}

BENCHMARK(BM_Pseudonymize<pht::kernels::PseudonymizeBatch>)->Name("Pseudonymize/parallel")->Arg(10'000);
BENCHMARK(BM_Pseudonymize<pht::kernels::PseudonymizeBatchSerial>)->Name("Pseudonymize/serial")->Arg(10'000);
BENCHMARK(BM_Score<pht::kernels::ScoreCandidates>)->Name("ScoreAllPairs/parallel")->Arg(2'000);
BENCHMARK(BM_Score<pht::kernels::ScoreCandidatesSerial>)->Name("ScoreAllPairs/serial")->Arg(2'000);

}  // namespace

BENCHMARK_MAIN();
