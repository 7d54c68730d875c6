// Copyright (c) 2026 The WebRouter Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "webrouter/scoring.hpp"
#include "webrouter/synthetic.hpp"

namespace wr = webrouter;

namespace {

void BM_CostScores(benchmark::State& state) {
  std::vector<double> costs;
  for (int t = 0; t < state.range(0); ++t) costs.push_back(1e-4 * (t + 1) * (t + 1));
  for (auto _ : state) benchmark::DoNotOptimize(wr::cost_scores(costs));
}
BENCHMARK(BM_CostScores)->Arg(3)->Arg(16);

void BM_BuildScores(benchmark::State& state) {
  const wr::SyntheticPoolSpec spec = wr::reference_synthetic_spec(8);
  const auto records = wr::generate_synthetic(spec, 256, 2).records;
  const wr::ModelPool pool = spec.pool();
  std::size_t i = 0;
  for (auto _ : state) {
    try {
      benchmark::DoNotOptimize(wr::build_scores(records[i++ % records.size()], pool));
    } catch (const std::exception&) {
    }
  }
}
BENCHMARK(BM_BuildScores);

}  // namespace
