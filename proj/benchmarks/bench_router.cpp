// Copyright (c) 2026 The WebRouter Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "webrouter/embedding.hpp"
#include "webrouter/router.hpp"
#include "webrouter/synthetic.hpp"
#include "webrouter/training.hpp"

namespace wr = webrouter;

namespace {

void BM_ForwardInfer(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(0));
  const wr::RouterParams params = wr::init_router(dim, 3);
  const wr::HashingEmbedder embedder(dim);
  const std::vector<double> x = embedder.embed("weather in Lisbon next weekend");
  const wr::ModelPool pool = wr::reference_pool();
  for (auto _ : state) benchmark::DoNotOptimize(wr::forward_infer(params, x, pool));
}
BENCHMARK(BM_ForwardInfer)->Arg(64)->Arg(768);

void BM_LossGradient(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(0));
  const wr::SyntheticPoolSpec spec = wr::reference_synthetic_spec(dim);
  wr::DatasetOptions opts;
  opts.dimension = dim;
  const wr::Dataset data = wr::score_records(wr::generate_synthetic(spec, 64, 1).records, spec.pool(), opts);
  const std::vector<wr::ScoredRecord> batch(data.records.begin(), data.records.begin() + 32);
  const wr::RouterParams params = wr::init_router(dim, 3);
  const wr::TrainConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(wr::loss_gradient(params, batch, spec.pool(), cfg, 7));
  state.SetItemsProcessed(state.iterations() * 32);
}
BENCHMARK(BM_LossGradient)->Arg(64)->Arg(768)->Unit(benchmark::kMillisecond);

void BM_HashingEmbed(benchmark::State& state) {
  const wr::HashingEmbedder embedder(768);
  const std::string text = "compare prices of noise-cancelling headphones under 200 euros";
  for (auto _ : state) benchmark::DoNotOptimize(embedder.embed(text));
}
BENCHMARK(BM_HashingEmbed);

}  // namespace
